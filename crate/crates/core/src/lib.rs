//! Random double circulant codes and the machinery needed to check, on
//! concrete instances, that they beat the Gilbert-Varshamov bound by a
//! linear factor.
//!
//! * [`gf2poly`]: bit vectors, `F2[Z]/(Z^n+1)` arithmetic, factorization of `Z^n+1`.
//! * [`numbertheory`]: primality, multiplicative order, Kasami primes.
//! * [`codes`]: double circulant and cyclic codes, the shift action, membership probabilities.
//! * [`spectrum`]: weight distributions, MacWilliams, exact and randomized minimum distance.
//! * [`bounds`]: ball volumes, thresholds, and every analytic bound used in the argument.
//! * [`verify`]: executable audits of each lemma plus Monte Carlo experiments.

pub mod bounds;
pub mod codes;
pub mod error;
pub mod gf2poly;
pub mod numbertheory;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};

use std::collections::BTreeMap;

/// Splits `k1=v1;k2=v2` into a map. Whitespace around keys and values is ignored.
pub(crate) fn parse_fields(s: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for part in s.trim().split(';').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        if out.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("duplicate key {:?}", k.trim())));
        }
    }
    Ok(out)
}

pub(crate) fn field<'a>(fields: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
    fields
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}
