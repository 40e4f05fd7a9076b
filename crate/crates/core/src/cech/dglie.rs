use std::fmt;

use serde_json::{json, Value};

use super::cochain::DeligneCochain;
use super::nerve::{NerveKind, NerveRef};
use crate::error::{Error, Result};
use crate::exterior::{parse_form, parse_vector_field, primitive, Chart, Form, MultiVector, VectorField};
use crate::nplectic::{l_infty_bracket, HamiltonianPair, Observable, PreNPlectic};

/// Element `(v, b)` of `Γ(TX) ⋉ Tot(𝒰, Ω^•)[n−1]^{≤n−1}`. An element of
/// degree `i` carries Čech–de Rham data of total degree `n − 1 − i`; only
/// degree 0 carries a vector field. Degrees outside `0..n` are truncated
/// to zero.
#[derive(Clone, Debug)]
pub struct SemidirectElement {
    nerve: NerveRef,
    level: usize,
    degree: i64,
    v: VectorField,
    b: Option<DeligneCochain>,
}

impl PartialEq for SemidirectElement {
    fn eq(&self, o: &Self) -> bool {
        self.nerve.same(&o.nerve) && self.level == o.level && self.degree == o.degree && self.v == o.v && self.b == o.b
    }
}

impl Eq for SemidirectElement {}

fn in_range(level: usize, degree: i64) -> bool {
    (0..level as i64).contains(&degree)
}

/// The container degree of `b` for an element of degree `i`.
fn cochain_degree(level: usize, degree: i64) -> usize {
    (level as i64 - degree) as usize
}

impl SemidirectElement {
    pub fn zero(nerve: NerveRef, level: usize, degree: i64) -> Self {
        let v = MultiVector::zero(nerve.global().clone(), 1);
        let b =
            in_range(level, degree).then(|| DeligneCochain::zero(nerve.clone(), level, cochain_degree(level, degree)));
        SemidirectElement {
            nerve,
            level,
            degree,
            v,
            b,
        }
    }

    /// `b` is stored as a level-`n` cochain of degree `n − i`, whose form
    /// slots are exactly the components of total degree `n − 1 − i`; its
    /// integer part must vanish.
    pub fn new(degree: i64, v: VectorField, b: DeligneCochain) -> Result<Self> {
        let (nerve, level) = (b.nerve().clone(), b.level());
        if !in_range(level, degree) {
            return Err(Error::DegreeMismatch(format!("degree {degree} outside 0..{level}")));
        }
        if b.degree() != cochain_degree(level, degree) {
            return Err(Error::DegreeMismatch(format!(
                "degree-{degree} elements carry total degree {}, got {}",
                level as i64 - 1 - degree,
                b.degree() as i64 - 1
            )));
        }
        if b.ints().iter().any(|z| z != &0.into()) {
            return Err(Error::DegreeMismatch("dg-Lie elements carry no integer part".into()));
        }
        crate::exterior::chart::ensure_same_chart(v.chart(), nerve.global())?;
        if v.degree() != 1 {
            return Err(Error::DegreeMismatch("v must be a vector field".into()));
        }
        if degree != 0 && !v.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "a degree-{degree} element has no vector part"
            )));
        }
        Ok(SemidirectElement {
            nerve,
            level,
            degree,
            v,
            b: Some(b),
        })
    }

    /// Element on a one-patch nerve from a single form of degree `n − 1 − i`.
    pub fn on_patch(nerve: &NerveRef, level: usize, degree: i64, v: VectorField, b: Form) -> Result<Self> {
        if !matches!(nerve.kind(), NerveKind::Trivial { .. }) {
            return Err(Error::WrongNerve(
                "single-form elements live on the trivial cover".into(),
            ));
        }
        if !in_range(level, degree) {
            return Err(Error::DegreeMismatch(format!("degree {degree} outside 0..{level}")));
        }
        let mut c = DeligneCochain::zero(nerve.clone(), level, cochain_degree(level, degree));
        c.set(0, 0, b)?;
        SemidirectElement::new(degree, v, c)
    }

    pub fn nerve(&self) -> &NerveRef {
        &self.nerve
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn v(&self) -> &VectorField {
        &self.v
    }

    pub fn b(&self) -> Option<&DeligneCochain> {
        self.b.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero() && self.b.as_ref().is_none_or(DeligneCochain::is_zero)
    }

    fn ensure_compatible(&self, o: &Self) -> Result<()> {
        self.nerve.ensure_same(&o.nerve)?;
        if self.level != o.level {
            return Err(Error::DegreeMismatch(format!("levels {} and {}", self.level, o.level)));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.ensure_compatible(o)?;
        if self.degree != o.degree {
            return Err(Error::DegreeMismatch(format!(
                "cannot add degree {} to degree {}",
                o.degree, self.degree
            )));
        }
        let b = match (&self.b, &o.b) {
            (Some(x), Some(y)) => Some(x.checked_add(y)?),
            _ => None,
        };
        Ok(SemidirectElement {
            v: self.v.checked_add(&o.v)?,
            b,
            ..self.clone()
        })
    }

    pub fn scale_int(&self, k: i64) -> Self {
        SemidirectElement {
            v: self.v.scale_int(k),
            b: self.b.as_ref().map(|b| b.scale_int(k)),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "level": self.level,
            "v": self.v.to_json(),
            "b": self.b.as_ref().map(DeligneCochain::to_json),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field {k}")));
        let degree = field("degree")?
            .as_i64()
            .ok_or_else(|| Error::Parse("degree must be an integer".into()))?;
        let b = DeligneCochain::from_json(field("b")?)?;
        let vf = MultiVector::from_json(field("v")?)?.rechart(b.nerve().global().clone())?;
        SemidirectElement::new(degree, vf, b)
    }
}

impl fmt::Display for SemidirectElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.b {
            Some(b) => write!(f, "({}, {})", self.v, b.describe()),
            None => write!(f, "(0, 0)"),
        }
    }
}

/// `𝓛_v` applied simplex-wise, with `v` restricted to each simplex chart.
/// Integer parts are dropped.
pub fn lie_on_cochain(v: &VectorField, c: &DeligneCochain) -> Result<DeligneCochain> {
    let nerve = c.nerve();
    let mut out = DeligneCochain::zero(nerve.clone(), c.level(), c.degree());
    if v.is_zero() {
        return Ok(out);
    }
    for (q, fs) in c.forms() {
        let simplices = nerve.simplices(*q);
        for (i, f) in fs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let local = v.rechart(simplices[i].chart.clone())?;
            out.set(*q, i, f.lie_derivative(&local)?)?;
        }
    }
    Ok(out)
}

/// `[(v₁,b₁),(v₂,b₂)] = ([v₁,v₂], 𝓛_{v₁}b₂ − (−1)^{|b₁||b₂|} 𝓛_{v₂}b₁)`, with
/// `|·|` the element degree.
pub fn dg_lie_bracket(x: &SemidirectElement, y: &SemidirectElement) -> Result<SemidirectElement> {
    x.ensure_compatible(y)?;
    let degree = x.degree + y.degree;
    let mut out = SemidirectElement::zero(x.nerve.clone(), x.level, degree);
    let Some(mut b) = out.b.take() else {
        return Ok(out);
    };
    if let (Some(b2), false) = (&y.b, x.v.is_zero()) {
        b = b.checked_add(&lie_on_cochain(&x.v, b2)?)?;
    }
    if let (Some(b1), false) = (&x.b, y.v.is_zero()) {
        let sign = if (x.degree * y.degree) % 2 == 0 { -1 } else { 1 };
        b = b.checked_add(&lie_on_cochain(&y.v, b1)?.scale_int(sign))?;
    }
    out.v = x.v.lie_bracket(&y.v)?;
    out.b = Some(b);
    Ok(out)
}

/// `(v, b) ↦ (0, d_tot b)`, lowering the degree by one.
pub fn dg_lie_differential(x: &SemidirectElement) -> Result<SemidirectElement> {
    let mut out = SemidirectElement::zero(x.nerve.clone(), x.level, x.degree - 1);
    if let (Some(b), true) = (&x.b, out.b.is_some()) {
        out.b = Some(b.total_differential()?);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub member: bool,
    /// `𝓛_v A − d_tot b`.
    pub residual: DeligneCochain,
}

impl MembershipReport {
    pub fn to_json(&self) -> Value {
        json!({"member": self.member, "residual": self.residual.to_json(), "display": self.residual.describe()})
    }
}

/// Whether `e` lies in the strict model of `A`: `𝓛_v A = d_tot b`.
pub fn dglie_membership(a: &DeligneCochain, e: &SemidirectElement) -> Result<MembershipReport> {
    a.nerve().ensure_same(e.nerve())?;
    let n = a.level();
    if a.degree() != n + 1 || e.level != n {
        return Err(Error::DegreeMismatch(format!(
            "need a degree-{} cocycle and a level-{n} element, got degree {} and level {}",
            n + 1,
            a.degree(),
            e.level
        )));
    }
    if e.degree != 0 {
        return Err(Error::DegreeMismatch(format!(
            "membership is defined in degree 0, not {}",
            e.degree
        )));
    }
    let report = a.is_cocycle()?;
    if !report.is_cocycle {
        return Err(Error::NotACocycle(report.residuals.join("; ")));
    }
    let b = e.b.as_ref().expect("degree-0 elements carry b");
    let residual = lie_on_cochain(&e.v, a)?.checked_sub(&b.total_differential()?)?;
    let residual = DeligneCochain::from_forms(residual.nerve().clone(), n, n + 1, residual.forms().clone())?;
    Ok(MembershipReport {
        member: residual.is_zero(),
        residual,
    })
}

fn global_potential(a: &DeligneCochain) -> Result<Form> {
    if !matches!(a.nerve().kind(), NerveKind::Trivial { .. }) {
        return Err(Error::WrongNerve(
            "the de Rham comparison needs the trivial cover".into(),
        ));
    }
    if a.degree() != a.level() + 1 {
        return Err(Error::DegreeMismatch(format!(
            "need a degree-{} cochain",
            a.level() + 1
        )));
    }
    Ok(a.form(0, 0).expect("trivial cover carries one patch form").clone())
}

/// Degree-0 member over a global potential: `b = ι_v A + P`, where `dP = ι_v dA`.
pub fn member_from_field(a: &DeligneCochain, v: &VectorField) -> Result<SemidirectElement> {
    let pot = global_potential(a)?;
    let omega = pot.d();
    let iw = omega.interior(v)?;
    let p = if iw.is_zero() {
        Form::zero(pot.chart().clone(), iw.degree().saturating_sub(1))
    } else {
        primitive(&iw)?.ok_or_else(|| Error::NotHamiltonian(format!("ι_v dA = {iw} is not exact")))?
    };
    let b = pot.interior(v)?.checked_add(&p)?;
    SemidirectElement::on_patch(a.nerve(), a.level(), 0, v.clone(), b)
}

/// The potential cochain of a global `n`-form on the trivial cover.
pub fn potential_cochain(nerve: &NerveRef, level: usize, a: Form) -> Result<DeligneCochain> {
    let mut c = DeligneCochain::zero(nerve.clone(), level, level + 1);
    c.set(0, 0, a)?;
    Ok(c)
}

/// `ℝ³` with `A = x dy∧dz` and members built from `∂x, ∂y, ∂z`, a rotation,
/// a shear and `x² ∂z`.
pub fn r3_corpus() -> Result<(DeligneCochain, Vec<SemidirectElement>)> {
    let chart = Chart::euclidean(3);
    let nerve = super::nerve::Nerve::trivial(chart.clone());
    let a = potential_cochain(&nerve, 2, parse_form(&chart, "x0*dx1^dx2")?)?;
    let members = ["pd0", "pd1", "pd2", "x0*pd1 - x1*pd0", "x2*pd0", "x0^2*pd2"]
        .iter()
        .map(|s| member_from_field(&a, &parse_vector_field(&chart, s)?))
        .collect::<Result<_>>()?;
    Ok((a, members))
}

#[derive(Clone, Debug)]
pub struct PairDefect {
    pub i: usize,
    pub j: usize,
    /// `h` of the image of the dg-Lie bracket minus `h` of the binary
    /// bracket of the images.
    pub defect: Form,
    pub primitive: Option<Form>,
}

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub images: Vec<HamiltonianPair>,
    pub defects: Vec<PairDefect>,
}

impl CompareReport {
    pub fn to_json(&self) -> Value {
        json!({
            "images": self.images.iter().map(|p| json!({"v": p.v().to_string(), "h": p.h().to_string()})).collect::<Vec<_>>(),
            "defects": self.defects.iter().map(|d| json!({
                "pair": [d.i, d.j],
                "defect": d.defect.to_string(),
                "primitive": d.primitive.as_ref().map(ToString::to_string),
                "exact": true,
            })).collect::<Vec<_>>(),
            "all_exact": true,
        })
    }
}

/// Applies `(v, b) ↦ (v, ι_v A − b)` to each member and checks that every
/// pairwise bracket defect is exact, returning its primitive.
pub fn compare_models(a: &DeligneCochain, members: &[SemidirectElement]) -> Result<CompareReport> {
    let pot = global_potential(a)?;
    let n = a.level();
    let p = PreNPlectic::new(pot.d(), n)?;
    let images: Vec<HamiltonianPair> = members
        .iter()
        .map(|m| {
            if m.degree != 0 {
                return Err(Error::DegreeMismatch(format!(
                    "members have degree 0, not {}",
                    m.degree
                )));
            }
            a.nerve().ensure_same(m.nerve())?;
            let b =
                m.b.as_ref()
                    .expect("degree-0 elements carry b")
                    .form(0, 0)
                    .expect("one patch");
            HamiltonianPair::new(&p, m.v.clone(), pot.interior(&m.v)?.checked_sub(b)?)
        })
        .collect::<Result<_>>()?;
    let mut defects = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let br = dg_lie_bracket(&members[i], &members[j])?;
            let bb = br.b.as_ref().expect("degree 0").form(0, 0).expect("one patch");
            let image = pot.interior(&br.v)?.checked_sub(bb)?;
            let l2 = l_infty_bracket(
                &p,
                &[Observable::Pair(images[i].clone()), Observable::Pair(images[j].clone())],
            )?;
            let l2h = l2.form_part().expect("binary bracket of pairs");
            let defect = image.checked_sub(l2h)?;
            let prim = if defect.is_zero() || defect.degree() == 0 {
                if !defect.is_zero() {
                    return Err(Error::NotAPrimitive(format!(
                        "pair ({i}, {j}): nonzero function defect {defect}"
                    )));
                }
                (defect.degree() > 0).then(|| Form::zero(defect.chart().clone(), defect.degree() - 1))
            } else {
                let h = primitive(&defect)?
                    .ok_or_else(|| Error::NotAPrimitive(format!("pair ({i}, {j}): defect {defect} is not exact")))?;
                if h.d() != defect {
                    return Err(Error::NotAPrimitive(format!(
                        "pair ({i}, {j}): primitive failed verification"
                    )));
                }
                Some(h)
            };
            defects.push(PairDefect {
                i,
                j,
                defect,
                primitive: prim,
            });
        }
    }
    Ok(CompareReport { images, defects })
}
