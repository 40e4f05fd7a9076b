//! Expression grammar for forms and multivector fields.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '^') unary)*
//! unary  := '-' unary | atom
//! atom   := INT ['/' INT] | 'tau' | 'i' | 'x'N | 'dx'N | 'pd'N
//!         | 'E[' INT (',' INT)* ']' | '(' expr ')'
//! ```
//!
//! `*` and `^` are both the wedge product (on functions it is ordinary
//! multiplication, so `x0^x0` is `x0²`). `pd`N is the coordinate field `∂_N`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::chart::ChartRef;
use super::coef::CoefFn;
use super::form::{basis_indices, merge_sign, Basis, Form, MultiVector};
use crate::error::{Error, Result};
use crate::scalar::{GaussRat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Kind {
    Form,
    Field,
}

/// Parsed value: a sum of `coef · basis` across kinds and degrees.
#[derive(Clone, Debug, Default)]
struct Value(BTreeMap<(Kind, Basis), CoefFn>);

impl Value {
    fn scalar(dim: usize, f: CoefFn) -> Value {
        let _ = dim;
        let mut m = BTreeMap::new();
        if !f.is_zero() {
            m.insert((Kind::Form, 0), f);
        }
        Value(m)
    }

    fn basis(dim: usize, kind: Kind, j: usize) -> Value {
        let mut m = BTreeMap::new();
        m.insert((kind, 1 << j), CoefFn::one(dim));
        Value(m)
    }

    fn add(mut self, o: Value, sign: i64) -> Value {
        for (k, f) in o.0 {
            let f = if sign < 0 { f.neg() } else { f };
            let sum = match self.0.remove(&k) {
                Some(g) => g.add(&f),
                None => f,
            };
            if !sum.is_zero() {
                self.0.insert(k, sum);
            }
        }
        self
    }

    fn wedge(&self, o: &Value) -> Result<Value> {
        let mut out = Value::default();
        for (&(ka, ba), fa) in &self.0 {
            for (&(kb, bb), fb) in &o.0 {
                let kind = match (ba, bb) {
                    (0, _) => kb,
                    (_, 0) => ka,
                    _ if ka == kb => ka,
                    _ => return Err(Error::Parse("cannot multiply a form by a multivector".into())),
                };
                let s = merge_sign(ba, bb);
                if s == 0 {
                    continue;
                }
                let p = fa.mul(fb);
                let mut single = BTreeMap::new();
                single.insert((kind, ba | bb), if s < 0 { p.neg() } else { p });
                out = out.add(Value(single), 1);
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    dim: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let neg = self.rest().starts_with('-');
        let start = self.pos + usize::from(neg);
        let len = self.src[start..].chars().take_while(char::is_ascii_digit).count();
        if len == 0 {
            return Err(self.err("expected an integer"));
        }
        let n: BigInt = self.src[start..start + len]
            .parse()
            .map_err(|_| self.err("bad integer"))?;
        self.pos = start + len;
        Ok(if neg { -n } else { n })
    }

    fn index(&mut self) -> Result<usize> {
        let len = self.rest().chars().take_while(char::is_ascii_digit).count();
        if len == 0 {
            return Err(self.err("expected an axis index"));
        }
        let j: usize = self.rest()[..len].parse().map_err(|_| self.err("bad axis index"))?;
        self.pos += len;
        if j >= self.dim {
            return Err(self.err(&format!("axis {j} out of range for dimension {}", self.dim)));
        }
        Ok(j)
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                acc = acc.add(self.term()?, 1);
            } else if self.eat("-") {
                acc = acc.add(self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        while self.eat("*") || self.eat("^") {
            acc = acc.wedge(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat("-") {
            return Ok(Value::default().add(self.unary()?, -1));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Value> {
        self.skip_ws();
        let d = self.dim;
        if self.eat("(") {
            let v = self.expr()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(v);
        }
        if self.eat("tau") {
            return Ok(Value::scalar(d, CoefFn::constant(d, Scalar::tau())));
        }
        if self.eat("dx") {
            let j = self.index()?;
            return Ok(Value::basis(d, Kind::Form, j));
        }
        if self.eat("pd") {
            let j = self.index()?;
            return Ok(Value::basis(d, Kind::Field, j));
        }
        if self.eat("x") {
            let j = self.index()?;
            return Ok(Value::scalar(d, CoefFn::coordinate(d, j)));
        }
        if self.eat("E[") {
            let mut wave = vec![self.number()?];
            while self.eat(",") {
                wave.push(self.number()?);
            }
            if !self.eat("]") {
                return Err(self.err("expected `]`"));
            }
            if wave.len() != d {
                return Err(self.err(&format!("wave vector needs {d} entries")));
            }
            let wave: Vec<i64> = wave
                .iter()
                .map(|k| i64::try_from(k).map_err(|_| self.err("wave index too large")))
                .collect::<Result<_>>()?;
            return Ok(Value::scalar(d, CoefFn::fourier(&wave)));
        }
        if self.eat("i") {
            return Ok(Value::scalar(d, CoefFn::constant(d, Scalar::i())));
        }
        if self.rest().starts_with(|c: char| c.is_ascii_digit()) {
            let n = self.number()?;
            let mut q = BigRational::from_integer(n);
            if self.eat("/") {
                let den = self.number()?;
                if den == BigInt::from(0) {
                    return Err(self.err("zero denominator"));
                }
                q /= BigRational::from_integer(den);
            }
            return Ok(Value::scalar(
                d,
                CoefFn::constant(d, Scalar::from_gauss(GaussRat::real(q))),
            ));
        }
        Err(self.err("unexpected input"))
    }
}

fn parse_value(chart: &ChartRef, src: &str) -> Result<Value> {
    let mut p = Parser {
        src,
        pos: 0,
        dim: chart.dim(),
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

fn homogeneous(v: Value, want: Kind) -> Result<(usize, Vec<(Vec<usize>, CoefFn)>)> {
    let mut degree = None;
    let mut raw = Vec::new();
    for ((kind, b), f) in v.0 {
        if b != 0 && kind != want {
            return Err(Error::Parse(format!(
                "expected a {}",
                if want == Kind::Form { "form" } else { "multivector" }
            )));
        }
        let deg = b.count_ones() as usize;
        if *degree.get_or_insert(deg) != deg {
            return Err(Error::Parse("expression is not homogeneous".into()));
        }
        raw.push((basis_indices(b), f));
    }
    Ok((degree.unwrap_or(0), raw))
}

/// Parses a homogeneous differential form.
pub fn parse_form(chart: &ChartRef, src: &str) -> Result<Form> {
    let (deg, raw) = homogeneous(parse_value(chart, src)?, Kind::Form)?;
    Form::from_terms(chart.clone(), deg, raw)
}

/// Parses a homogeneous form of a required degree (`0` parses to the zero form).
pub fn parse_form_of_degree(chart: &ChartRef, src: &str, degree: usize) -> Result<Form> {
    let f = parse_form(chart, src)?;
    if f.is_zero() {
        return Ok(Form::zero(chart.clone(), degree));
    }
    if f.degree() != degree {
        return Err(Error::DegreeMismatch(format!(
            "expected a {degree}-form, got degree {}",
            f.degree()
        )));
    }
    Ok(f)
}

/// Parses a homogeneous multivector field (`pd`N atoms).
pub fn parse_multivector(chart: &ChartRef, src: &str) -> Result<MultiVector> {
    let (deg, raw) = homogeneous(parse_value(chart, src)?, Kind::Field)?;
    MultiVector::from_terms(chart.clone(), deg, raw)
}

/// Parses a vector field; `0` is accepted.
pub fn parse_vector_field(chart: &ChartRef, src: &str) -> Result<MultiVector> {
    let m = parse_multivector(chart, src)?;
    if m.is_zero() {
        return Ok(MultiVector::zero(chart.clone(), 1));
    }
    if m.degree() != 1 {
        return Err(Error::DegreeMismatch(format!(
            "expected a vector field, got degree {}",
            m.degree()
        )));
    }
    Ok(m)
}

/// Parses a coefficient function.
pub fn parse_function(chart: &ChartRef, src: &str) -> Result<CoefFn> {
    Ok(parse_form_of_degree(chart, src, 0)?.coefficient(&[]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::chart::Chart;

    #[test]
    fn wedge_and_signs() {
        let r2 = Chart::euclidean(2);
        let a = parse_form(&r2, "(x0*dx1) ^ (x1*dx0)").unwrap();
        let xy = CoefFn::coordinate(2, 0).mul(&CoefFn::coordinate(2, 1));
        assert_eq!(
            a,
            Form::from_terms(r2.clone(), 2, vec![(vec![0, 1], xy.neg())]).unwrap()
        );
        assert!(parse_form(&r2, "dx0 ^ dx0").unwrap().is_zero());
    }

    #[test]
    fn atoms() {
        let t2 = Chart::torus(2);
        let f = parse_function(&t2, "1/2*tau*i*E[1,-2]").unwrap();
        assert_eq!(f.terms().len(), 1);
        assert!(parse_form(&t2, "x0").is_err());
        assert!(parse_form(&t2, "dx0 + dx0^dx1").is_err());
        assert!(parse_form(&t2, "dx2").is_err());
        let v = parse_vector_field(&Chart::euclidean(2), "-x1*pd0 + x0*pd1").unwrap();
        assert_eq!(v.degree(), 1);
        assert!(parse_form(&t2, "dx0 * pd1").is_err());
    }
}
