//! Collapsing measurements of two-branch macroscopic superpositions and the
//! quantum resources that survive them.
//!
//! Start with [`effective_states`] for the branch algebra and [`collapse`] for
//! the measurement itself. The guide in `book/` walks through each module.

pub mod collapse;
pub mod dynamics;
pub mod effective_states;
pub mod entanglement;
pub mod error;
pub mod optimize;
pub mod oracle;
pub mod photonic;
pub mod spin_metrology;

pub use error::{Error, Result};
pub use nalgebra;
pub use num_complex;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/collapse.md")]
    mod collapse {}
    #[doc = include_str!("../../../book/src/spin-metrology.md")]
    mod spin_metrology {}
    #[doc = include_str!("../../../book/src/orthogonalization.md")]
    mod orthogonalization {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/photonic.md")]
    mod photonic {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
