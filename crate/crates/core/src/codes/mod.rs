//! Double circulant codes, cyclic codes `C(u)`, the shift action, and the
//! probability that a fixed vector lies in a random double circulant code.

mod cyclic;
mod double_circulant;
mod membership;
mod orbit;

pub use cyclic::{class_cn, cyclic_contains, cyclic_from_vector, cyclic_lattice, odd_prime_power, CyclicCode};
pub use double_circulant::{dc_contains, dc_sample, parse_defining_vector, DoubleCirculantCode, SyndromePair};
pub use membership::membership_probability;
pub use orbit::{canonical_rep, orbit_length, orbit_table, orbit_table_csv, shift_action, OrbitRow};
