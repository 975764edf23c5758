//! Multi-dimensional complex FFTs on cubic `m^d` arrays.
//!
//! Plans are cached process-wide; `rustfft` plans are `Send + Sync` so the
//! cache can be shared by concurrent solves.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

type PlanCache = Mutex<HashMap<(usize, Direction), Arc<dyn Fft<f64>>>>;

fn plan(len: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry((len, dir))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            match dir {
                Direction::Forward => planner.plan_fft_forward(len),
                Direction::Inverse => planner.plan_fft_inverse(len),
            }
        })
        .clone()
}

/// Unnormalized in-place transform of an `m^dim` row-major array.
pub(crate) fn transform(data: &mut [Complex64], dim: usize, m: usize, dir: Direction) {
    let total = data.len();
    debug_assert_eq!(total, m.pow(dim as u32));
    let fft = plan(m, dir);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];

    // Contiguous last axis: one batched call.
    fft.process_with_scratch(data, &mut scratch);

    let mut lines = vec![Complex64::new(0.0, 0.0); total];
    for axis in 0..dim - 1 {
        let stride = m.pow((dim - 1 - axis) as u32);
        let outer = total / (m * stride);
        // gather every line along `axis` into contiguous storage
        let mut pos = 0;
        for o in 0..outer {
            let base = o * m * stride;
            for s in 0..stride {
                for t in 0..m {
                    lines[pos] = data[base + t * stride + s];
                    pos += 1;
                }
            }
        }
        fft.process_with_scratch(&mut lines, &mut scratch);
        let mut pos = 0;
        for o in 0..outer {
            let base = o * m * stride;
            for s in 0..stride {
                for t in 0..m {
                    data[base + t * stride + s] = lines[pos];
                    pos += 1;
                }
            }
        }
    }
}
