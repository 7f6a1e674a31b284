//! Pure quasi-free states, Bogoliubov maps and the Wick rule.

pub mod bloch_messiah;
pub mod bogoliubov;
pub mod state;
pub mod wick;

pub use bloch_messiah::{bloch_messiah, canonical_form};
pub use bogoliubov::{BogoliubovMap, Factor};
pub use state::{QuasiFree, StateSnapshot, PURITY_TOL};
pub use wick::{kparticle_rdm, two_point, wick, Op};
