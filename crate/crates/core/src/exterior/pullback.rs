use num_rational::BigRational;
use num_traits::{One, Zero};

use super::chart::{ensure_same_chart, ChartRef};
use super::coef::{exact_phase, CoefFn, Mono};
use super::form::{basis_indices, Form};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Image of one target coordinate under an axis-affine map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AxisImage {
    /// `y_j = x_axis + offset`.
    Shift { axis: usize, offset: BigRational },
    /// `y_j = c`.
    Const(BigRational),
}

/// Axis-affine map `φ: source → target`, one [`AxisImage`] per target axis.
/// Used for patch inclusions and winding shifts between branch charts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub source: ChartRef,
    pub target: ChartRef,
    pub images: Vec<AxisImage>,
}

impl AffineMap {
    pub fn new(source: ChartRef, target: ChartRef, images: Vec<AxisImage>) -> Result<Self> {
        if images.len() != target.dim() {
            return Err(Error::DegreeMismatch(format!(
                "{} axis images for a {}-dimensional target",
                images.len(),
                target.dim()
            )));
        }
        for im in &images {
            if let AxisImage::Shift { axis, .. } = im {
                if *axis >= source.dim() {
                    return Err(Error::DegreeMismatch(format!("source axis {axis} out of range")));
                }
            }
        }
        Ok(AffineMap { source, target, images })
    }

    /// Same dimension, `y_j = x_j + offsets[j]`.
    pub fn shift(source: ChartRef, target: ChartRef, offsets: &[BigRational]) -> Result<Self> {
        let images = offsets
            .iter()
            .enumerate()
            .map(|(axis, o)| AxisImage::Shift {
                axis,
                offset: o.clone(),
            })
            .collect();
        AffineMap::new(source, target, images)
    }

    pub fn identity(chart: ChartRef) -> Self {
        let zeros = vec![BigRational::zero(); chart.dim()];
        AffineMap::shift(chart.clone(), chart, &zeros).expect("identity map")
    }

    fn pull_axis_power(&self, j: usize, p: u32, k: i64) -> Result<CoefFn> {
        let ds = self.source.dim();
        match &self.images[j] {
            AxisImage::Const(c) => {
                let mut v = BigRational::one();
                for _ in 0..p {
                    v *= c;
                }
                let ph = phase(&(c * BigRational::from_integer(k.into())))?;
                Ok(CoefFn::constant(ds, Scalar::from_rational(v).scale_gauss(&ph)))
            }
            AxisImage::Shift { axis, offset } => {
                // (x + o)^p E_k(x + o) = e^{iτ k o} Σ C(p,r) o^{p−r} x^r E_k(x)
                let ph = phase(&(offset * BigRational::from_integer(k.into())))?;
                let mut out = CoefFn::zero(ds);
                let mut binom = BigRational::one();
                for r in 0..=p {
                    let mut opow = BigRational::one();
                    for _ in 0..(p - r) {
                        opow *= offset;
                    }
                    let mut m = Mono::one(ds);
                    m.pow[*axis] = r;
                    m.wave[*axis] = k;
                    out.add_term(m, &Scalar::from_rational(&binom * opow).scale_gauss(&ph));
                    binom =
                        binom * BigRational::from_integer((p - r).into()) / BigRational::from_integer((r + 1).into());
                }
                Ok(out)
            }
        }
    }

    /// Pullback of a coefficient function.
    pub fn pull_coef(&self, f: &CoefFn) -> Result<CoefFn> {
        let mut out = CoefFn::zero(self.source.dim());
        for (m, c) in f.terms() {
            let mut acc = CoefFn::constant(self.source.dim(), c.clone());
            for j in 0..self.target.dim() {
                if m.pow[j] == 0 && m.wave[j] == 0 {
                    continue;
                }
                acc = acc.mul(&self.pull_axis_power(j, m.pow[j], m.wave[j])?);
            }
            out = out.add(&acc);
        }
        out.check_chart(&self.source)
            .map_err(|e| Error::BranchIncompatible(e.to_string()))?;
        Ok(out)
    }

    fn pull_dx(&self, j: usize) -> Form {
        match &self.images[j] {
            AxisImage::Shift { axis, .. } => Form::dx(self.source.clone(), *axis),
            AxisImage::Const(_) => Form::zero(self.source.clone(), 1),
        }
    }

    /// `φ^* a`.
    pub fn pullback(&self, a: &Form) -> Result<Form> {
        ensure_same_chart(a.chart(), &self.target)?;
        let src = self.source.clone();
        let mut out = Form::zero(src.clone(), a.degree());
        if a.degree() > src.dim() {
            return Ok(out);
        }
        for (b, f) in a.terms() {
            let mut piece = Form::function(src.clone(), self.pull_coef(f)?)?;
            for j in basis_indices(*b) {
                piece = piece.wedge(&self.pull_dx(j))?;
            }
            if piece.degree() == out.degree() {
                out = &out + &piece;
            }
        }
        Ok(out)
    }
}

fn phase(r: &BigRational) -> Result<crate::scalar::GaussRat> {
    exact_phase(r).ok_or_else(|| Error::BranchIncompatible(format!("phase exp(2πi·{r}) is not exact")))
}

pub fn pullback(phi: &AffineMap, a: &Form) -> Result<Form> {
    phi.pullback(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::chart::Chart;
    use crate::scalar::{int, rat};

    #[test]
    fn winding_shift() {
        let r2 = Chart::euclidean(2);
        let phi = AffineMap::shift(r2.clone(), r2.clone(), &[int(1), int(0)]).unwrap();
        let x = CoefFn::coordinate(2, 0);
        let a = Form::from_terms(r2.clone(), 1, vec![(vec![1], x.clone())]).unwrap();
        let expect = Form::from_terms(r2.clone(), 1, vec![(vec![1], x.add(&CoefFn::one(2)))]).unwrap();
        assert_eq!(phi.pullback(&a).unwrap(), expect);
        let dx = Form::dx(r2.clone(), 0);
        assert_eq!(phi.pullback(&dx).unwrap(), dx);
        let f = Form::function(r2.clone(), x.mul(&CoefFn::coordinate(2, 1))).unwrap();
        assert_eq!(phi.pullback(&f.d()).unwrap(), phi.pullback(&f).unwrap().d());
    }

    #[test]
    fn fourier_phase_must_be_exact() {
        let s1 = Chart::torus(1);
        let e = Form::function(s1.clone(), CoefFn::fourier(&[1])).unwrap();
        let half = AffineMap::shift(s1.clone(), s1.clone(), &[rat(1, 2)]).unwrap();
        assert_eq!(half.pullback(&e).unwrap(), e.scale_int(-1));
        let third = AffineMap::shift(s1.clone(), s1.clone(), &[rat(1, 3)]).unwrap();
        assert!(matches!(third.pullback(&e), Err(Error::BranchIncompatible(_))));
    }

    #[test]
    fn polynomial_onto_circle_is_rejected() {
        let line = Chart::euclidean(1);
        let s1 = Chart::torus(1);
        let into_line = AffineMap::shift(s1.clone(), line.clone(), &[int(0)]).unwrap();
        let x = Form::function(line, CoefFn::coordinate(1, 0)).unwrap();
        assert!(into_line.pullback(&x).is_err());
    }
}
