//! Canonical JSON: object keys sorted, no insignificant whitespace.

use serde::Serialize;

use crate::error::Result;

/// Serialises through `serde_json::Value`, whose maps are ordered by key, so
/// equal inputs always produce identical bytes.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value)?;
    Ok(serde_json::to_string(&value)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[derive(Serialize)]
    struct Unsorted {
        zeta: u8,
        alpha: HashMap<&'static str, u8>,
    }

    #[test]
    fn keys_are_sorted_at_every_level() {
        let value = Unsorted {
            zeta: 1,
            alpha: HashMap::from([("b", 2), ("a", 1), ("c", 3)]),
        };
        assert_eq!(to_canonical_json(&value).unwrap(), r#"{"alpha":{"a":1,"b":2,"c":3},"zeta":1}"#);
    }
}
