pub mod cli;
pub mod io;
pub mod rheology;
pub mod simulator;
pub mod spectral;
pub mod stokes;
pub mod transport;
pub mod verify;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/rheology.md")]
    mod rheology {}
    #[doc = include_str!("../../../book/src/stokes.md")]
    mod stokes {}
    #[doc = include_str!("../../../book/src/transport.md")]
    mod transport {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
