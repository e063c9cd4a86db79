//! Arithmetic in `F2[Z]/(Z^n + 1)` and factorization of `Z^n + 1`.

mod bitvec;
mod factor;
mod poly;
pub(crate) mod word;

pub use bitvec::BitVec;
pub use factor::{
    coset_size_profile, cyclotomic_cosets, divisors_of_z_n_plus_one, factorize, factorize_with_limit,
    kasami_factors, repetition_poly, Factorization, DEFAULT_FACTOR_LIMIT, DIVISOR_LIMIT,
};
pub use poly::{poly_gcd, poly_mul_mod, Gf2Poly, Poly};
