use serde_json::{json, Value};

use super::observable::arity_sign;
use super::structure::PreNPlectic;
use crate::error::{Error, Result};
use crate::exterior::{Form, SlotOrder, VectorField};

/// Outcome of comparing `dH` with the `n`-ary bracket datum of the fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DwReport {
    pub holds: bool,
    pub lhs: Form,
    pub rhs: Form,
    pub residual: Form,
    pub sign: i64,
    pub note: Option<String>,
}

impl DwReport {
    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
            "residual": self.residual.to_string(),
            "sign": self.sign,
            "note": self.note,
        })
    }
}

/// Checks `dH = ±ι_{v1∧⋯∧vn} ω`, with the arity sign for `n ≥ 3` and the
/// bare contraction otherwise.
pub fn dw_check(p: &PreNPlectic, h: &Form, fields: &[VectorField], slots: SlotOrder) -> Result<DwReport> {
    let n = p.n();
    if fields.len() != n {
        return Err(Error::Arity(format!("expected {n} fields, got {}", fields.len())));
    }
    if !h.is_zero() && h.degree() != 0 {
        return Err(Error::DegreeMismatch("H must be a function".into()));
    }
    let sign = if n >= 3 { arity_sign(n) } else { 1 };
    let lhs = h.rechart(p.chart().clone())?.d();
    let rhs = p.omega().contract_fields(fields, slots)?.scale_int(sign);
    let residual = lhs.checked_sub(&rhs)?;
    let note = (n == 2).then(|| "binary bracket is pair-valued; compared against its form component".to_string());
    Ok(DwReport {
        holds: residual.is_zero(),
        lhs,
        rhs,
        residual,
        sign,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conventions::DEFAULT_SLOT_ORDER;
    use crate::exterior::{parse_form, parse_vector_field, Chart};
    use crate::nplectic::check_pre_nplectic;

    #[test]
    fn volume_form() {
        let r3 = Chart::euclidean(3);
        let p = check_pre_nplectic(parse_form(&r3, "dx0^dx1^dx2").unwrap(), 2).unwrap();
        let fs = vec![
            parse_vector_field(&r3, "pd0").unwrap(),
            parse_vector_field(&r3, "pd1").unwrap(),
        ];
        let r = dw_check(&p, &parse_form(&r3, "x2").unwrap(), &fs, DEFAULT_SLOT_ORDER).unwrap();
        assert!(r.holds && r.residual.is_zero());
        let r = dw_check(&p, &parse_form(&r3, "0").unwrap(), &fs, DEFAULT_SLOT_ORDER).unwrap();
        assert!(!r.holds);
        assert_eq!(r.residual, parse_form(&r3, "-dx2").unwrap());
        assert!(matches!(
            dw_check(&p, &parse_form(&r3, "x2").unwrap(), &fs[..1], DEFAULT_SLOT_ORDER),
            Err(Error::Arity(_))
        ));
    }

    #[test]
    fn symplectic_plane() {
        let r2 = Chart::euclidean(2);
        let p = check_pre_nplectic(parse_form(&r2, "dx0^dx1").unwrap(), 1).unwrap();
        let fs = vec![parse_vector_field(&r2, "pd1").unwrap()];
        assert!(
            dw_check(&p, &parse_form(&r2, "-x0").unwrap(), &fs, DEFAULT_SLOT_ORDER)
                .unwrap()
                .holds
        );
    }
}
