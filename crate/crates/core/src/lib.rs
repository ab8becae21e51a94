//! Branching of depth-zero-induced principal series of unramified `U(1,1)` to the
//! hyperspecial maximal compact subgroup `K`, computed on the finite quotients `K/K_N`.

pub mod branching;
pub mod chars;
pub mod classfun;
pub mod error;
pub mod group;
pub mod liealg;
pub mod phase;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
pub use group::{ConjClasses, GroupTable, Level, Mat2, Named, SubgroupTable};
pub use phase::Phase;
pub use ring::{Quad, RingCtx, Shifted};
