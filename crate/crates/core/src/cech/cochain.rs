use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::nerve::{Nerve, NerveKind, NerveRef};
use crate::error::{Error, Result};
use crate::exterior::chart::ensure_same_chart;
use crate::exterior::json::TensorRepr;
use crate::exterior::Form;
use crate::scalar::Scalar;

/// Simplex levels carrying forms in a degree-`m` cochain of level `n`; the
/// form degree on level `q` is `m − 1 − q`.
pub fn form_levels(level: usize, degree: usize) -> std::ops::Range<usize> {
    if degree == 0 {
        return 0..0;
    }
    (degree - 1).saturating_sub(level)..degree
}

/// A cochain of the Deligne complex `ℤ → Ω⁰ → Ω¹ → ⋯ → Ωⁿ` on a nerve:
/// an integer cochain on `m`-simplices and real forms of degree `m − 1 − q`
/// on `q`-simplices. A level-`n` connection is a degree-`(n+1)` cocycle.
#[derive(Clone, Debug)]
pub struct DeligneCochain {
    nerve: NerveRef,
    level: usize,
    degree: usize,
    forms: BTreeMap<usize, Vec<Form>>,
    ints: Vec<BigInt>,
}

impl PartialEq for DeligneCochain {
    fn eq(&self, o: &Self) -> bool {
        self.nerve.same(&o.nerve)
            && self.level == o.level
            && self.degree == o.degree
            && self.forms == o.forms
            && self.ints == o.ints
    }
}

impl Eq for DeligneCochain {}

/// `Σ_i (−1)^i φ_i^* c(∂_i σ)` on every simplex of level `q + 1`.
pub(crate) fn coboundary_forms(nerve: &Nerve, q: usize, c: &[Form], degree: usize) -> Result<Vec<Form>> {
    nerve
        .simplices(q + 1)
        .iter()
        .map(|s| {
            let mut acc = Form::zero(s.chart.clone(), degree);
            for (i, f) in s.faces.iter().enumerate() {
                let pulled = f.map.pullback(&c[f.index])?;
                acc = if i % 2 == 0 {
                    acc.checked_add(&pulled)?
                } else {
                    acc.checked_sub(&pulled)?
                };
            }
            Ok(acc)
        })
        .collect()
}

fn coboundary_ints(nerve: &Nerve, q: usize, z: &[BigInt]) -> Vec<BigInt> {
    nerve
        .simplices(q + 1)
        .iter()
        .map(|s| {
            s.faces.iter().enumerate().fold(BigInt::zero(), |acc, (i, f)| {
                if i % 2 == 0 {
                    acc + &z[f.index]
                } else {
                    acc - &z[f.index]
                }
            })
        })
        .collect()
}

impl DeligneCochain {
    pub fn zero(nerve: NerveRef, level: usize, degree: usize) -> Self {
        let forms = form_levels(level, degree)
            .map(|q| {
                let p = degree - 1 - q;
                (
                    q,
                    nerve
                        .simplices(q)
                        .iter()
                        .map(|s| Form::zero(s.chart.clone(), p))
                        .collect(),
                )
            })
            .collect();
        let ints = vec![BigInt::zero(); nerve.count(degree)];
        DeligneCochain {
            nerve,
            level,
            degree,
            forms,
            ints,
        }
    }

    /// Validated construction from per-level forms and integers.
    pub fn new(
        nerve: NerveRef,
        level: usize,
        degree: usize,
        forms: BTreeMap<usize, Vec<Form>>,
        ints: Vec<BigInt>,
    ) -> Result<Self> {
        let mut c = DeligneCochain::zero(nerve, level, degree);
        if ints.len() != c.ints.len() {
            return Err(Error::DegreeMismatch(format!(
                "{} integers for {} simplices",
                ints.len(),
                c.ints.len()
            )));
        }
        c.ints = ints;
        for (q, fs) in forms {
            if fs.len() != c.nerve.count(q) {
                return Err(Error::DegreeMismatch(format!(
                    "{} forms for {} simplices of level {q}",
                    fs.len(),
                    c.nerve.count(q)
                )));
            }
            for (i, f) in fs.into_iter().enumerate() {
                c.set(q, i, f)?;
            }
        }
        Ok(c)
    }

    /// Like [`DeligneCochain::new`], with the integer part taken to be the
    /// Čech coboundary of the bottom functions whenever that coboundary is
    /// integer constant (zero otherwise).
    pub fn from_forms(nerve: NerveRef, level: usize, degree: usize, forms: BTreeMap<usize, Vec<Form>>) -> Result<Self> {
        let n = nerve.count(degree);
        let c = DeligneCochain::new(nerve, level, degree, forms, vec![BigInt::zero(); n])?;
        Ok(c.normalized())
    }

    pub fn nerve(&self) -> &NerveRef {
        &self.nerve
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn forms(&self) -> &BTreeMap<usize, Vec<Form>> {
        &self.forms
    }

    pub fn level_forms(&self, q: usize) -> Option<&[Form]> {
        self.forms.get(&q).map(Vec::as_slice)
    }

    pub fn form(&self, q: usize, i: usize) -> Option<&Form> {
        self.forms.get(&q).and_then(|v| v.get(i))
    }

    pub fn ints(&self) -> &[BigInt] {
        &self.ints
    }

    pub fn set(&mut self, q: usize, i: usize, f: Form) -> Result<()> {
        let nerve = self.nerve.clone();
        let slot = self
            .forms
            .get_mut(&q)
            .and_then(|v| v.get_mut(i))
            .ok_or_else(|| Error::DegreeMismatch(format!("no form slot at level {q}, simplex {i}")))?;
        let s = &nerve.simplices(q)[i];
        ensure_same_chart(&s.chart, f.chart())?;
        if !f.is_zero() && f.degree() != slot.degree() {
            return Err(Error::DegreeMismatch(format!(
                "level {q} carries {}-forms",
                slot.degree()
            )));
        }
        if !f.is_zero() {
            *slot = f;
        } else {
            *slot = Form::zero(s.chart.clone(), slot.degree());
        }
        Ok(())
    }

    pub fn set_int(&mut self, i: usize, v: BigInt) -> Result<()> {
        let slot = self
            .ints
            .get_mut(i)
            .ok_or_else(|| Error::DegreeMismatch(format!("no integer slot {i}")))?;
        *slot = v;
        Ok(())
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        self.nerve.ensure_same(&o.nerve)?;
        if self.level != o.level || self.degree != o.degree {
            return Err(Error::DegreeMismatch(format!(
                "level/degree ({}, {}) vs ({}, {})",
                self.level, self.degree, o.level, o.degree
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.combine(o, 1)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, -1)
    }

    fn combine(&self, o: &Self, sign: i64) -> Result<Self> {
        self.check_compatible(o)?;
        let mut out = self.clone();
        for (q, fs) in out.forms.iter_mut() {
            for (f, g) in fs.iter_mut().zip(&o.forms[q]) {
                *f = f.checked_add(&g.scale_int(sign))?;
            }
        }
        for (a, b) in out.ints.iter_mut().zip(&o.ints) {
            *a += b * BigInt::from(sign);
        }
        Ok(out)
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let mut out = self.clone();
        for fs in out.forms.values_mut() {
            for f in fs.iter_mut() {
                *f = f.scale_int(k);
            }
        }
        for a in out.ints.iter_mut() {
            *a *= k;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.ints.iter().all(Zero::is_zero) && self.forms.values().flatten().all(Form::is_zero)
    }

    /// `D = −δ` on integers, `δ + (−1)^q d` on forms, and `−ι` from integers
    /// into the bottom functions; forms above degree `n` are dropped.
    pub fn total_differential(&self) -> Result<DeligneCochain> {
        let (n, m) = (self.level, self.degree);
        let mut out = DeligneCochain::zero(self.nerve.clone(), n, m + 1);
        out.ints = coboundary_ints(&self.nerve, m, &self.ints)
            .into_iter()
            .map(|v| -v)
            .collect();
        for q in form_levels(n, m + 1) {
            let p = m - q;
            let mut comp: Vec<Form> = self
                .nerve
                .simplices(q)
                .iter()
                .map(|s| Form::zero(s.chart.clone(), p))
                .collect();
            if q >= 1 {
                if let Some(prev) = self.forms.get(&(q - 1)) {
                    for (c, x) in comp.iter_mut().zip(coboundary_forms(&self.nerve, q - 1, prev, p)?) {
                        *c = c.checked_add(&x)?;
                    }
                }
            }
            if let Some(same) = self.forms.get(&q) {
                for (c, f) in comp.iter_mut().zip(same) {
                    let df = f.d();
                    *c = if q % 2 == 0 {
                        c.checked_add(&df)?
                    } else {
                        c.checked_sub(&df)?
                    };
                }
            }
            if p == 0 {
                for ((c, z), s) in comp.iter_mut().zip(&self.ints).zip(self.nerve.simplices(q)) {
                    if !z.is_zero() {
                        let k = Form::constant(
                            s.chart.clone(),
                            Scalar::from_rational(BigRational::from_integer(z.clone())),
                        );
                        *c = c.checked_sub(&k)?;
                    }
                }
            }
            out.forms.insert(q, comp);
        }
        Ok(out)
    }

    /// Bottom-level residual `δf − z` as integers, when every entry is an
    /// integer constant.
    fn bottom_integer_residual(&self, d: &DeligneCochain) -> Option<Vec<BigInt>> {
        let bottom = d.forms.get(&self.degree)?;
        bottom
            .iter()
            .map(|f| {
                if f.is_zero() {
                    return Some(BigInt::zero());
                }
                f.as_function()?.constant_value()?.as_integer()
            })
            .collect()
    }

    /// Cocycle test with the bottom functions read modulo integer constants.
    pub fn is_cocycle(&self) -> Result<CocycleReport> {
        let d = self.total_differential()?;
        let mut residuals = Vec::new();
        for (q, fs) in &d.forms {
            if *q == self.degree {
                continue;
            }
            for (i, f) in fs.iter().enumerate() {
                if !f.is_zero() {
                    residuals.push(format!("{:?}: {f}", self.nerve.simplices(*q)[i].vertices));
                }
            }
        }
        let bottom = self.bottom_integer_residual(&d);
        let bottom_integral = bottom.is_some() || self.degree == 0;
        if !bottom_integral {
            for (i, f) in d.forms[&self.degree].iter().enumerate() {
                if !f.is_zero() {
                    residuals.push(format!("{:?}: {f}", self.nerve.simplices(self.degree)[i].vertices));
                }
            }
        }
        let shift = bottom.map_or(0, |v| v.iter().filter(|x| !x.is_zero()).count());
        Ok(CocycleReport {
            is_cocycle: residuals.is_empty(),
            residuals,
            integer_corrections: shift,
        })
    }

    /// Absorbs an integer-constant bottom residual into the integer part.
    pub fn normalized(&self) -> DeligneCochain {
        let Ok(d) = self.total_differential() else {
            return self.clone();
        };
        match self.bottom_integer_residual(&d) {
            Some(r) => {
                let mut out = self.clone();
                for (z, x) in out.ints.iter_mut().zip(r) {
                    *z += x;
                }
                out
            }
            None => self.clone(),
        }
    }

    pub fn to_repr(&self) -> CochainRepr {
        let mut forms = Vec::new();
        for (q, fs) in &self.forms {
            for (i, f) in fs.iter().enumerate() {
                if !f.is_zero() {
                    forms.push(ComponentRepr {
                        simplex: self.nerve.simplices(*q)[i].vertices.clone(),
                        form: f.to_repr(),
                    });
                }
            }
        }
        let integers = self
            .ints
            .iter()
            .enumerate()
            .filter(|(_, z)| !z.is_zero())
            .map(|(i, z)| IntRepr {
                simplex: self.nerve.simplices(self.degree)[i].vertices.clone(),
                value: z.to_string(),
            })
            .collect();
        CochainRepr {
            nerve: self.nerve.kind().clone(),
            level: self.level,
            degree: self.degree,
            forms,
            integers,
        }
    }

    pub fn from_repr(r: &CochainRepr) -> Result<Self> {
        let nerve = Nerve::from_kind(&r.nerve)?;
        Self::from_repr_on(nerve, r)
    }

    pub fn from_repr_on(nerve: NerveRef, r: &CochainRepr) -> Result<Self> {
        if nerve.kind() != &r.nerve {
            return Err(Error::NerveMismatch(format!("{:?} vs {:?}", nerve.kind(), r.nerve)));
        }
        let mut c = DeligneCochain::zero(nerve.clone(), r.level, r.degree);
        for comp in &r.forms {
            let (q, i) = nerve
                .find(&comp.simplex)
                .ok_or_else(|| Error::Parse(format!("unknown simplex {:?}", comp.simplex)))?;
            let f = Form::from_repr(&comp.form)?.rechart(nerve.simplices(q)[i].chart.clone())?;
            c.set(q, i, f)?;
        }
        for z in &r.integers {
            let (q, i) = nerve
                .find(&z.simplex)
                .ok_or_else(|| Error::Parse(format!("unknown simplex {:?}", z.simplex)))?;
            if q != r.degree {
                return Err(Error::Parse(format!(
                    "integer on a level-{q} simplex in a degree-{} cochain",
                    r.degree
                )));
            }
            let v: BigInt = z
                .value
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer `{}`", z.value)))?;
            c.set_int(i, v)?;
        }
        Ok(c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_repr()).expect("cochain serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let r: CochainRepr = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_repr(&r)
    }

    /// Multi-line listing of the nonzero components.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        for (q, fs) in &self.forms {
            for (i, f) in fs.iter().enumerate() {
                if !f.is_zero() {
                    let _ = writeln!(s, "{:?}: {f}", self.nerve.simplices(*q)[i].vertices);
                }
            }
        }
        for (i, z) in self.ints.iter().enumerate() {
            if !z.is_zero() {
                let sign = if z.is_negative() { "" } else { "+" };
                let _ = writeln!(
                    s,
                    "{:?}: {sign}{z} (integer)",
                    self.nerve.simplices(self.degree)[i].vertices
                );
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub is_cocycle: bool,
    pub residuals: Vec<String>,
    /// Simplices whose bottom residual is a nonzero integer constant.
    pub integer_corrections: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRepr {
    pub simplex: Vec<usize>,
    pub form: TensorRepr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntRepr {
    pub simplex: Vec<usize>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CochainRepr {
    pub nerve: NerveKind,
    pub level: usize,
    pub degree: usize,
    pub forms: Vec<ComponentRepr>,
    pub integers: Vec<IntRepr>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{CoefFn, Form};
    use crate::scalar::rat;

    fn on_patches(nerve: &NerveRef, q: usize, f: impl Fn(&crate::exterior::ChartRef) -> Form) -> Vec<Form> {
        nerve.simplices(q).iter().map(|s| f(&s.chart)).collect()
    }

    #[test]
    fn constants_are_flat() {
        let s1 = Nerve::circle();
        let half = Scalar::from_rational(rat(1, 2));
        let forms = [(0, on_patches(&s1, 0, |c| Form::constant(c.clone(), half.clone())))]
            .into_iter()
            .collect();
        let c = DeligneCochain::new(s1.clone(), 1, 1, forms, vec![BigInt::zero(); 3]).unwrap();
        assert!(c.total_differential().unwrap().is_zero());
        assert!(c.is_cocycle().unwrap().is_cocycle);
    }

    #[test]
    fn global_one_form() {
        let s1 = Nerve::circle();
        let theta = Scalar::from_rational(rat(2, 7));
        let forms = [(0, on_patches(&s1, 0, |c| Form::dx(c.clone(), 0).scale(&theta)))]
            .into_iter()
            .collect();
        let c = DeligneCochain::from_forms(s1, 1, 2, forms).unwrap();
        assert!(c.total_differential().unwrap().is_zero());
        assert!(c.is_cocycle().unwrap().is_cocycle);
    }

    #[test]
    fn coordinate_on_one_patch() {
        let s1 = Nerve::circle();
        let mut c = DeligneCochain::zero(s1.clone(), 1, 1);
        let chart = s1.simplices(0)[0].chart.clone();
        c.set(0, 0, Form::function(chart, CoefFn::coordinate(1, 0)).unwrap())
            .unwrap();
        let d = c.total_differential().unwrap();
        assert_eq!(d.form(0, 0).unwrap(), &Form::dx(s1.simplices(0)[0].chart.clone(), 0));
        assert!(!d.level_forms(1).unwrap().iter().all(Form::is_zero));
        assert!(!c.is_cocycle().unwrap().is_cocycle);
    }

    #[test]
    fn json_round_trip() {
        let s1 = Nerve::circle();
        let forms = [(
            0,
            on_patches(&s1, 0, |c| Form::function(c.clone(), CoefFn::fourier(&[1])).unwrap()),
        )]
        .into_iter()
        .collect();
        let c = DeligneCochain::new(s1, 2, 1, forms, vec![BigInt::from(3), BigInt::zero(), BigInt::from(-1)]).unwrap();
        assert_eq!(DeligneCochain::from_json(&c.to_json()).unwrap(), c);
    }
}
