//! Exact scalars.
//!
//! [`GaussRat`] is an element of ℚ(i). [`Scalar`] is a Laurent polynomial in a
//! formal unit `tau` (standing for 2π) with Gaussian-rational coefficients, and
//! [`RatFn`] is its fraction field ℚ(i)(tau), used only inside linear solves.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `a` or `a/b`.
pub fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussRat {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussRat {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussRat::real(int(1)),
            1 => GaussRat::i(),
            2 => GaussRat::real(int(-1)),
            _ => -GaussRat::i(),
        }
    }

    fn render(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rat(&self.re),
            (true, false) => format!("{}*i", fmt_rat(&self.im)),
            (false, false) if self.im.is_negative() => format!("({}-{}*i)", fmt_rat(&self.re), fmt_rat(&-&self.im)),
            (false, false) => format!("({}+{}*i)", fmt_rat(&self.re), fmt_rat(&self.im)),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            // "(a+b*i)"; the real part may itself start with '-'
            let body = inner.trim();
            let split = body
                .char_indices()
                .skip(1)
                .filter(|(_, c)| *c == '+' || *c == '-')
                .map(|(p, _)| p)
                .last()
                .ok_or_else(|| Error::Parse(format!("invalid gaussian rational `{s}`")))?;
            let re = parse_rat(&body[..split])?;
            let im_part = body[split..].trim_start_matches('+');
            let im = im_part
                .strip_suffix("*i")
                .ok_or_else(|| Error::Parse(format!("invalid gaussian rational `{s}`")))?;
            return Ok(GaussRat::new(re, parse_rat(im)?));
        }
        if let Some(im) = s.strip_suffix("*i") {
            return Ok(GaussRat::new(BigRational::zero(), parse_rat(im)?));
        }
        Ok(GaussRat::real(parse_rat(s)?))
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, o: &GaussRat) -> GaussRat {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::real(&self.re * &o.re);
        }
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat {
            re: -self.re,
            im: -self.im,
        }
    }
}

/// Laurent polynomial in `tau` over ℚ(i), kept in canonical form: exponents
/// strictly increasing, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: Vec<(i32, GaussRat)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(int(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::from_gauss(GaussRat::real(r))
    }

    pub fn from_gauss(g: GaussRat) -> Self {
        Scalar::monomial(g, 0)
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::from_rational(rat(n, d))
    }

    /// `c · tau^e`.
    pub fn monomial(c: GaussRat, e: i32) -> Self {
        if c.is_zero() {
            Scalar::zero()
        } else {
            Scalar { terms: vec![(e, c)] }
        }
    }

    pub fn tau() -> Self {
        Scalar::monomial(GaussRat::real(int(1)), 1)
    }

    pub fn tau_pow(e: i32) -> Self {
        Scalar::monomial(GaussRat::real(int(1)), e)
    }

    pub fn i() -> Self {
        Scalar::from_gauss(GaussRat::i())
    }

    /// Builds a scalar from arbitrary `(exponent, coefficient)` pairs.
    pub fn from_terms(mut raw: Vec<(i32, GaussRat)>) -> Self {
        raw.sort_by_key(|(e, _)| *e);
        let mut terms: Vec<(i32, GaussRat)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match terms.last_mut() {
                Some((le, lc)) if *le == e => *lc = &*lc + &c,
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Scalar { terms }
    }

    pub fn terms(&self) -> &[(i32, GaussRat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// Coefficient of `tau^e`.
    pub fn coeff(&self, e: i32) -> GaussRat {
        self.terms
            .iter()
            .find(|(x, _)| *x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    /// The value as a plain rational, if the scalar is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, c)] if c.im.is_zero() => Some(c.re.clone()),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Invertible elements of the Laurent ring are the nonzero monomials.
    pub fn inv(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [(e, c)] => Some(Scalar::monomial(c.inv()?, -e)),
            _ => None,
        }
    }

    pub fn scale_gauss(&self, g: &GaussRat) -> Scalar {
        if g.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(e, c)| (*e, c * g)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Scalar {
        self.scale_gauss(&GaussRat::real(int(k)))
    }

    pub fn mul_tau_pow(&self, s: i32) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect(),
        }
    }

    /// Numeric value with `tau = 2π`.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let tau = std::f64::consts::TAU;
        self.terms
            .iter()
            .map(|(e, c)| {
                let f = tau.powi(*e);
                num_complex::Complex64::new(
                    c.re.to_f64().unwrap_or(f64::NAN) * f,
                    c.im.to_f64().unwrap_or(f64::NAN) * f,
                )
            })
            .sum()
    }

    /// Reduces the real rational part modulo ℤ into `[0, 1)`, leaving every
    /// other component as is.
    pub fn reduce_mod_integers(&self) -> Scalar {
        let c0 = self.coeff(0);
        let frac = &c0.re - c0.re.floor();
        let mut raw: Vec<(i32, GaussRat)> = self.terms.iter().filter(|(e, _)| *e != 0).cloned().collect();
        raw.push((0, GaussRat::new(frac, c0.im)));
        Scalar::from_terms(raw)
    }

    pub fn max_abs_exponent(&self) -> i32 {
        self.terms.iter().map(|(e, _)| e.abs()).max().unwrap_or(0)
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), o.terms.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((ea, ca)), Some((eb, cb))) => match ea.cmp(eb) {
                    Ordering::Less => {
                        out.push((*ea, ca.clone()));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((*eb, cb.clone()));
                        b.next();
                    }
                    Ordering::Equal => {
                        let s = ca + cb;
                        if !s.is_zero() {
                            out.push((*ea, s));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some(t), None) => {
                    out.push((*t).clone());
                    a.next();
                }
                (None, Some(t)) => {
                    out.push((*t).clone());
                    b.next();
                }
                (None, None) => break,
            }
        }
        Scalar { terms: out }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o.clone())
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if let [(ea, ca)] = self.terms.as_slice() {
            return Scalar {
                terms: o.terms.iter().map(|(e, c)| (e + ea, ca * c)).collect(),
            };
        }
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                raw.push((ea + eb, ca * cb));
            }
        }
        Scalar::from_terms(raw)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

/// Canonical rendering: terms in increasing `tau` exponent joined by ` + `;
/// each term is the coefficient (`a/b`, `a/b*i` or `(a/b+c/d*i)`) followed by
/// `*tau^k` when `k != 0`. Zero renders as `0`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                if *e == 0 {
                    c.render()
                } else {
                    format!("{}*tau^{}", c.render(), e)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scalar> {
        let s = s.trim();
        if s == "0" {
            return Ok(Scalar::zero());
        }
        let mut raw = Vec::new();
        for part in s.split(" + ") {
            let part = part.trim();
            let (coef, e) = match part.rsplit_once("*tau^") {
                Some((c, e)) => (
                    c,
                    e.parse::<i32>()
                        .map_err(|_| Error::Parse(format!("invalid exponent in `{part}`")))?,
                ),
                None => (part, 0),
            };
            raw.push((e, GaussRat::parse(coef)?));
        }
        Ok(Scalar::from_terms(raw))
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Univariate polynomials in tau over ℚ(i), dense ascending coefficients.

type Poly = Vec<GaussRat>;

fn poly_trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GaussRat::default(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let zero = GaussRat::default();
    let mut out: Poly = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
        .collect();
    poly_trim(&mut out);
    out
}

/// Multiplies by `tau^s`, `s >= 0`.
fn poly_shift(a: &Poly, s: usize) -> Poly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GaussRat::default(); s];
    out.extend(a.iter().cloned());
    out
}

fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    poly_trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = b.last().and_then(|c| c.inv()).expect("division by zero polynomial");
    let mut q = vec![GaussRat::default(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&c * bc);
        }
        q[shift] = c;
        r.pop();
        poly_trim(&mut r);
    }
    poly_trim(&mut q);
    (q, r)
}

fn poly_monic(p: &Poly) -> Poly {
    match p.last().and_then(|c| c.inv()) {
        Some(l) => p.iter().map(|c| c * &l).collect(),
        None => p.clone(),
    }
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b);
        a = b;
        b = r;
    }
    poly_monic(&a)
}

/// Number of leading zero coefficients (the power of `tau` dividing `p`).
fn poly_valuation(p: &Poly) -> usize {
    p.iter().take_while(|c| c.is_zero()).count()
}

/// Element of ℚ(i)(tau): `tau^shift · num / den` with `den` monic, neither
/// polynomial divisible by `tau`, and `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    shift: i32,
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn {
            shift: 0,
            num: Vec::new(),
            den: vec![GaussRat::real(int(1))],
        }
    }

    pub fn one() -> Self {
        RatFn::from(&Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn den_is_one(&self) -> bool {
        self.den.len() == 1
    }

    fn normalize(shift: i32, mut num: Poly, mut den: Poly) -> RatFn {
        poly_trim(&mut num);
        poly_trim(&mut den);
        if num.is_empty() {
            return RatFn::zero();
        }
        let vn = poly_valuation(&num);
        let vd = poly_valuation(&den);
        num.drain(..vn);
        den.drain(..vd);
        let shift = shift + vn as i32 - vd as i32;
        if den.len() > 1 {
            let g = poly_gcd(&num, &den);
            if g.len() > 1 {
                num = poly_divrem(&num, &g).0;
                den = poly_divrem(&den, &g).0;
            }
        }
        let lead_inv = den.last().unwrap().inv().unwrap();
        if !lead_inv.is_one() {
            num = num.iter().map(|c| c * &lead_inv).collect();
            den = den.iter().map(|c| c * &lead_inv).collect();
        }
        RatFn { shift, num, den }
    }

    pub fn inv(&self) -> Option<RatFn> {
        if self.is_zero() {
            return None;
        }
        Some(RatFn::normalize(-self.shift, self.den.clone(), self.num.clone()))
    }

    /// Back into the Laurent ring, when the denominator is trivial.
    pub fn to_scalar(&self) -> Option<Scalar> {
        if !self.den_is_one() {
            return None;
        }
        Some(Scalar::from_terms(
            self.num
                .iter()
                .enumerate()
                .map(|(i, c)| (self.shift + i as i32, c.clone()))
                .collect(),
        ))
    }

    /// Splits into `(numerator, denominator)` Laurent polynomials.
    pub fn num_den(&self) -> (Scalar, Scalar) {
        let num = Scalar::from_terms(
            self.num
                .iter()
                .enumerate()
                .map(|(i, c)| (self.shift + i as i32, c.clone()))
                .collect(),
        );
        let den = Scalar::from_terms(
            self.den
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i32, c.clone()))
                .collect(),
        );
        (num, den)
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let m = self.shift.min(o.shift);
        let a = poly_shift(&self.num, (self.shift - m) as usize);
        let b = poly_shift(&o.num, (o.shift - m) as usize);
        if self.den == o.den {
            return RatFn::normalize(m, poly_add(&a, &b), self.den.clone());
        }
        let num = poly_add(&poly_mul(&a, &o.den), &poly_mul(&b, &self.den));
        RatFn::normalize(m, num, poly_mul(&self.den, &o.den))
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            shift: self.shift,
            num: self.num.iter().map(|c| -c.clone()).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        let shift = self.shift + o.shift;
        if self.den_is_one() && o.den_is_one() {
            return RatFn {
                shift,
                num: poly_mul(&self.num, &o.num),
                den: self.den.clone(),
            };
        }
        RatFn::normalize(shift, poly_mul(&self.num, &o.num), poly_mul(&self.den, &o.den))
    }

    pub fn div(&self, o: &RatFn) -> Option<RatFn> {
        Some(self.mul(&o.inv()?))
    }

    /// Simplicity measure used for pivot choice.
    pub fn weight(&self) -> usize {
        self.num.len() + self.den.len()
    }
}

/// Rescales a vector over ℚ(i)(tau) by a common denominator so that every
/// entry lies in the Laurent ring.
pub fn clear_denominators(v: &[RatFn]) -> Vec<Scalar> {
    let mut l: Poly = vec![GaussRat::real(int(1))];
    for x in v {
        if x.den_is_one() {
            continue;
        }
        let g = poly_gcd(&l, &x.den);
        l = poly_divrem(&poly_mul(&l, &x.den), &g).0;
    }
    let lr = RatFn::normalize(0, l, vec![GaussRat::real(int(1))]);
    v.iter()
        .map(|x| x.mul(&lr).to_scalar().expect("common denominator clears every entry"))
        .collect()
}

impl From<&Scalar> for RatFn {
    fn from(s: &Scalar) -> RatFn {
        if s.is_zero() {
            return RatFn::zero();
        }
        let lo = s.terms[0].0;
        let hi = s.terms.last().unwrap().0;
        let mut num = vec![GaussRat::default(); (hi - lo + 1) as usize];
        for (e, c) in &s.terms {
            num[(e - lo) as usize] = c.clone();
        }
        RatFn {
            shift: lo,
            num,
            den: vec![GaussRat::real(int(1))],
        }
    }
}

impl From<Scalar> for RatFn {
    fn from(s: Scalar) -> RatFn {
        RatFn::from(&s)
    }
}

/// Sign helper: `(-1)^k`.
pub fn sign_pow(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_times_inverse_is_one() {
        let t = Scalar::tau();
        assert_eq!(&t * &t.inv().unwrap(), Scalar::one());
    }

    #[test]
    fn canonical_rendering() {
        let s = Scalar::tau().scale_gauss(&GaussRat::real(rat(1, 2)));
        assert_eq!(s.to_string(), "1/2*tau^1");
        assert_eq!(Scalar::zero().to_string(), "0");
        let mixed = &Scalar::from_int(3) + &Scalar::monomial(GaussRat::new(rat(-1, 2), rat(3, 4)), -2);
        assert_eq!(mixed.to_string(), "(-1/2+3/4*i)*tau^-2 + 3");
        assert_eq!(mixed.to_string().parse::<Scalar>().unwrap(), mixed);
        assert_eq!("-2/3*i*tau^1".parse::<Scalar>().unwrap().to_string(), "-2/3*i*tau^1");
    }

    #[test]
    fn non_monomials_are_not_units() {
        let s = &Scalar::one() + &Scalar::tau();
        assert!(s.inv().is_none());
        let r = RatFn::from(&s).inv().unwrap();
        assert!(r.to_scalar().is_none());
        assert_eq!(r.mul(&RatFn::from(&s)), RatFn::one());
    }

    #[test]
    fn ratfn_cancels_common_factors() {
        // (tau^2 - 1) / (tau - 1) = tau + 1
        let a = &Scalar::tau_pow(2) - &Scalar::one();
        let b = &Scalar::tau() - &Scalar::one();
        let q = RatFn::from(&a).div(&RatFn::from(&b)).unwrap();
        assert_eq!(q.to_scalar().unwrap(), &Scalar::tau() + &Scalar::one());
    }

    #[test]
    fn reduce_mod_integers_keeps_fraction() {
        let s = Scalar::ratio(7, 3);
        assert_eq!(s.reduce_mod_integers(), Scalar::ratio(1, 3));
        assert_eq!(Scalar::ratio(-1, 4).reduce_mod_integers(), Scalar::ratio(3, 4));
    }
}
