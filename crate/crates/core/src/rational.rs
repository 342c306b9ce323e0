//! Exact rationals and their `{num, den}` JSON form.

use serde::{Deserialize, Serialize};

pub type Rational = num_rational::Rational64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: i64,
    pub den: i64,
}

impl From<Rational> for RationalJson {
    fn from(r: Rational) -> Self {
        RationalJson {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl From<RationalJson> for Rational {
    fn from(r: RationalJson) -> Self {
        Rational::new(r.num, r.den)
    }
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `serialize_with` helper for maps of rationals.
pub fn serialize_map<K, S>(map: &std::collections::BTreeMap<K, Rational>, s: S) -> Result<S::Ok, S::Error>
where
    K: Serialize,
    S: serde::Serializer,
{
    s.collect_map(map.iter().map(|(k, &v)| (k, RationalJson::from(v))))
}
