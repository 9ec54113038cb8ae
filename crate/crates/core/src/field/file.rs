use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::LocalShape;
use crate::config::KeyValues;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Contents of a field description file.
///
/// ```text
/// poly: x^3 - 2
/// disc: -108
/// shape_3: 1^3
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDescriptor {
    pub poly: IntPolynomial,
    pub disc: Option<BigInt>,
    /// Declared splitting shapes at excluded primes.
    pub shapes: BTreeMap<u64, LocalShape>,
}

impl FieldDescriptor {
    pub fn parse(text: &str) -> Result<Self> {
        let kv = KeyValues::parse(text)?;
        Self::from_key_values(&kv)
    }

    pub(crate) fn from_key_values(kv: &KeyValues) -> Result<Self> {
        let poly = IntPolynomial::parse(kv.require("poly")?)?;
        let disc = kv
            .get("disc")?
            .map(|d| d.parse::<BigInt>().map_err(|e| Error::Parse(format!("disc: {e}"))))
            .transpose()?;
        let mut shapes = BTreeMap::new();
        for (k, v, n) in kv.entries() {
            if let Some(p) = k.strip_prefix("shape_") {
                let p: u64 = p.parse().map_err(|_| Error::Parse(format!("line {n}: bad prime in {k:?}")))?;
                shapes.insert(p, LocalShape::parse(v)?);
            }
        }
        Ok(FieldDescriptor { poly, disc, shapes })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("poly: {}\n", self.poly);
        if let Some(d) = &self.disc {
            out.push_str(&format!("disc: {d}\n"));
        }
        for (p, s) in &self.shapes {
            out.push_str(&format!("shape_{p}: {s}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_field_file() {
        let d = FieldDescriptor::parse("poly: x^3 - x + 1\ndisc: -23\n").unwrap();
        assert_eq!(d.poly, IntPolynomial::from_i64(&[1, -1, 0, 1]));
        assert_eq!(d.disc, Some(BigInt::from(-23)));
        let e = FieldDescriptor::parse("poly: [1, 0, 1]\nshape_2: 1^2").unwrap();
        assert_eq!(e.shapes[&2].to_string(), "1^2");
        assert_eq!(FieldDescriptor::parse(&e.to_text()).unwrap(), e);
        assert!(FieldDescriptor::parse("disc: 5").is_err());
    }
}
