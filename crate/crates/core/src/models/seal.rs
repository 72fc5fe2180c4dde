//! Context fingerprints stamped into the adversarial model's constructions.

use sha2::{Digest, Sha256};

use crate::finval::{FinSet, Val};

/// First `bytes` bytes of the SHA-256 digest, hex encoded.
pub fn digest_hex(data: &[u8], bytes: usize) -> String {
    let digest = Sha256::digest(data);
    digest.iter().take(bytes).map(|b| format!("{b:02x}")).collect()
}

/// The seal of a constructor applied over `ctx` to `args`. Arguments are
/// rendered canonically, so equal inputs always give equal seals.
pub fn seal(constructor: &str, ctx: &FinSet, args: &[&Val]) -> String {
    let mut text = format!("{constructor}|{ctx}");
    for a in args {
        text.push('|');
        text.push_str(&a.to_string());
    }
    format!("s{}", digest_hex(text.as_bytes(), 6))
}

/// `seal[constructor[payload]]`.
pub fn sealed(seal: &str, constructor: &str, payload: Val) -> Val {
    Val::tag(seal, Val::tag(constructor, payload))
}

/// Strips a seal, returning the constructor tag and its payload.
pub fn unseal(v: &Val) -> Option<(&str, &Val)> {
    let (_, inner) = v.as_tag()?;
    inner.as_tag()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seals_separate_contexts() {
        let pool: Vec<FinSet> = (1..4)
            .flat_map(|n| [FinSet::atoms("g", n), FinSet::atoms("h", n)])
            .collect();
        let arg = Val::atom("A");
        let seals: std::collections::BTreeSet<String> =
            pool.iter().map(|c| seal("sum", c, &[&arg])).collect();
        assert_eq!(seals.len(), pool.len());
        assert_eq!(seal("sum", &pool[3], &[&arg]), seal("sum", &pool[3], &[&arg]));
        assert_ne!(seal("sum", &pool[3], &[&arg]), seal("pi", &pool[3], &[&arg]));
    }

    #[test]
    fn unseal_round_trip() {
        let v = sealed("s00", "inl", Val::atom("x"));
        assert_eq!(unseal(&v), Some(("inl", &Val::atom("x"))));
    }
}
