//! JSON encoding of integers that may exceed the exactly representable
//! range of a double: values with magnitude above `2^53` are written as
//! decimal strings, smaller values as numbers. Both forms are accepted on
//! input.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const SAFE_LIMIT: u64 = 1 << 53;

#[derive(Deserialize)]
#[serde(untagged)]
enum Repr {
    Num(u64),
    Text(String),
}

fn encode<S: Serializer>(v: u64, s: S) -> Result<S::Ok, S::Error> {
    if v > SAFE_LIMIT {
        s.serialize_str(&v.to_string())
    } else {
        s.serialize_u64(v)
    }
}

fn decode<E: serde::de::Error>(r: Repr) -> Result<u64, E> {
    match r {
        Repr::Num(v) => Ok(v),
        Repr::Text(t) => t.parse().map_err(|_| E::custom(format!("`{t}` is not an unsigned integer"))),
    }
}

pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
    encode(*v, s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
    decode(Repr::deserialize(d)?)
}

/// The same encoding applied elementwise to a `Vec<u64>`.
pub mod seq {
    use super::*;

    struct Item(u64);

    impl Serialize for Item {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            encode(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(v: &[u64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|&x| Item(x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u64>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(decode::<D::Error>)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::VerificationMode;

    #[test]
    fn large_primes_become_strings() {
        let mode = VerificationMode::Modular {
            primes: vec![2147483659, (1 << 62) + 135],
        };
        let text = serde_json::to_string(&mode).unwrap();
        assert_eq!(text, r#"{"kind":"modular","primes":[2147483659,"4611686018427388039"]}"#);
        let back: VerificationMode = serde_json::from_str(&text).unwrap();
        assert_eq!(back, mode);
        assert!(serde_json::from_str::<VerificationMode>(r#"{"kind":"modular","primes":["x"]}"#).is_err());
    }
}
