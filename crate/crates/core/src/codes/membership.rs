use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::codes::cyclic_from_vector;
use crate::error::{Error, Result};
use crate::gf2poly::BitVec;

/// `Pr{x in C_rand}` over a uniform defining vector `a`: `1/|C(x_R)|` when
/// `x_L in C(x_R)`, else 0. Exact.
pub fn membership_probability(x: &BitVec) -> Result<BigRational> {
    if x.is_empty() || !x.len().is_multiple_of(2) {
        return Err(Error::invalid(format!("vector length {} is not 2n with n >= 1", x.len())));
    }
    let (left, right) = x.split_at(x.len() / 2);
    let c = cyclic_from_vector(&right)?;
    if c.contains(&left)? {
        Ok(BigRational::new(BigInt::one(), BigInt::one() << c.dim()))
    } else {
        Ok(BigRational::zero())
    }
}
