//! Dense univariate polynomials over a [`FieldCtx`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement, Level, Ops};

/// A polynomial with coefficients low-to-high, stored as element codes.
///
/// The coefficient vector never ends in a zero; the zero polynomial has no
/// coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: FieldCtx,
    level: Level,
    coeffs: Vec<u64>,
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Polynomial {
    pub(crate) fn from_codes(ctx: &FieldCtx, level: Level, mut coeffs: Vec<u64>) -> Self {
        trim(&mut coeffs);
        Polynomial {
            ctx: ctx.clone(),
            level,
            coeffs,
        }
    }

    pub fn zero(ctx: &FieldCtx, level: Level) -> Self {
        Self::from_codes(ctx, level, Vec::new())
    }

    pub fn one(ctx: &FieldCtx, level: Level) -> Self {
        Self::from_codes(ctx, level, vec![1])
    }

    /// The indeterminate `X`.
    pub fn x(ctx: &FieldCtx, level: Level) -> Self {
        Self::from_codes(ctx, level, vec![0, 1])
    }

    pub fn constant(ctx: &FieldCtx, c: FieldElement) -> Self {
        Self::from_codes(ctx, c.level(), vec![c.code()])
    }

    /// `c * X^degree`.
    pub fn monomial(ctx: &FieldCtx, c: FieldElement, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c.code();
        Self::from_codes(ctx, c.level(), coeffs)
    }

    /// `X^n - c` over `F_q`.
    pub fn binomial(ctx: &FieldCtx, n: usize, c: FieldElement) -> Self {
        let ops = ctx.ops(c.level());
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        coeffs[0] = ops.sub(coeffs[0], c.code());
        Self::from_codes(ctx, c.level(), coeffs)
    }

    /// `X^n - 1` over `F_q`.
    pub fn x_pow_minus_one(ctx: &FieldCtx, n: usize) -> Self {
        Self::binomial(ctx, n, FieldElement::one(Level::Base))
    }

    /// Builds a polynomial from coefficients low-to-high.
    pub fn from_elements(ctx: &FieldCtx, level: Level, coeffs: &[FieldElement]) -> Result<Self> {
        if coeffs.iter().any(|c| c.level() != level) {
            return Err(Error::LevelMismatch);
        }
        Ok(Self::from_codes(
            ctx,
            level,
            coeffs.iter().map(|c| c.code()).collect(),
        ))
    }

    /// Builds a base-level polynomial from small integers reduced into the
    /// prime field, low-to-high.
    pub fn from_ints(ctx: &FieldCtx, coeffs: &[i64]) -> Self {
        Self::from_codes(
            ctx,
            Level::Base,
            coeffs.iter().map(|&c| ctx.scalar(c).code()).collect(),
        )
    }

    /// Builds a polynomial from per-coefficient digit vectors (the JSON form).
    pub fn from_digit_vectors(ctx: &FieldCtx, level: Level, coeffs: &[Vec<u64>]) -> Result<Self> {
        let codes = coeffs
            .iter()
            .map(|d| ctx.element_from_digits(level, d).map(|e| e.code()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_codes(ctx, level, codes))
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub(crate) fn codes(&self) -> &[u64] {
        &self.coeffs
    }

    pub(crate) fn ops(&self) -> Ops<'_> {
        self.ctx.ops(self.level)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Number of coefficients, i.e. `degree + 1` (0 for the zero polynomial).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        FieldElement::new_unchecked(self.level, self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        (0..self.coeffs.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn leading(&self) -> FieldElement {
        FieldElement::new_unchecked(self.level, self.coeffs.last().copied().unwrap_or(0))
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.level != other.level {
            return Err(Error::LevelMismatch);
        }
        Ok(())
    }

    fn with_coeffs(&self, coeffs: Vec<u64>) -> Self {
        Self::from_codes(&self.ctx, self.level, coeffs)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let ops = self.ops();
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                ops.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.with_coeffs(Vec::new()));
        }
        let ops = self.ops();
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            ops.axpy(&mut out[i..], &other.coeffs, c);
        }
        Ok(self.with_coeffs(out))
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: FieldElement) -> Self {
        let ops = self.ops();
        self.with_coeffs(self.coeffs.iter().map(|&x| ops.mul(x, c.code())).collect())
    }

    /// The monic associate; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => {
                let inv = self.ops().inv(lc);
                self.scale(FieldElement::new_unchecked(self.level, inv))
            }
        }
    }

    /// Quotient and remainder with `deg rem < deg divisor`.
    pub fn divmod(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_ring(divisor)?;
        let Some(dg) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let ops = self.ops();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((self.with_coeffs(Vec::new()), self.clone()));
        }
        let inv_lc = ops.inv(divisor.coeffs[dg]);
        let mut quot = vec![0u64; rem.len() - dg];
        for i in (dg..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let qc = ops.mul(c, inv_lc);
            quot[i - dg] = qc;
            ops.axpy(&mut rem[i - dg..=i], &divisor.coeffs, ops.neg(qc));
        }
        rem.truncate(dg);
        Ok((self.with_coeffs(quot), self.with_coeffs(rem)))
    }

    /// Remainder only.
    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        self.same_ring(divisor)?;
        let Some(dg) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        if self.coeffs.len() <= dg {
            return Ok(self.clone());
        }
        let ops = self.ops();
        let mut rem = self.coeffs.clone();
        reduce_in_place(ops, &mut rem, &divisor.coeffs);
        Ok(self.with_coeffs(rem))
    }

    /// Exact quotient; fails if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divmod(divisor)?;
        if !r.is_zero() {
            return Err(Error::Inconsistent(format!(
                "{divisor} does not divide {self}"
            )));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic gcd by Euclid's algorithm.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::UndefinedGcd);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Self {
        let ops = self.ops();
        let r = self.ctx.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| {
                let i = (i as u64 % r) as i64;
                ops.mul(c, self.ctx.scalar(i).code())
            })
            .collect();
        self.with_coeffs(coeffs)
    }

    /// `f(X^t)`.
    pub fn inflate(&self, t: usize) -> Self {
        assert!(t >= 1, "inflation exponent must be positive");
        if self.is_zero() || t == 1 {
            return self.clone();
        }
        let mut coeffs = vec![0u64; (self.coeffs.len() - 1) * t + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * t] = c;
        }
        self.with_coeffs(coeffs)
    }

    /// `f(cX)`.
    pub fn scale_variable(&self, c: FieldElement) -> Self {
        let ops = self.ops();
        let mut power = 1u64;
        let coeffs = self
            .coeffs
            .iter()
            .map(|&x| {
                let y = ops.mul(x, power);
                power = ops.mul(power, c.code());
                y
            })
            .collect();
        self.with_coeffs(coeffs)
    }

    /// Horner evaluation. A base-level polynomial may be evaluated at a
    /// tower point through the embedding.
    pub fn eval(&self, x: FieldElement) -> Result<FieldElement> {
        let level = match (self.level, x.level()) {
            (a, b) if a == b => a,
            (Level::Base, Level::Tower) => Level::Tower,
            _ => return Err(Error::LevelMismatch),
        };
        self.ctx.element(level, 0)?;
        let ops = self.ctx.ops(level);
        let acc = self
            .coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| ops.add(ops.mul(acc, x.code()), c));
        Ok(FieldElement::new_unchecked(level, acc))
    }

    /// The same polynomial viewed over `F_{q^2}`.
    pub fn to_tower(&self) -> Result<Self> {
        self.ctx.element(Level::Tower, 0)?;
        Ok(Self::from_codes(
            &self.ctx,
            Level::Tower,
            self.coeffs.clone(),
        ))
    }

    /// The same polynomial over `F_q`, if every coefficient lies in `F_q`.
    pub fn to_base(&self) -> Option<Self> {
        match self.level {
            Level::Base => Some(self.clone()),
            Level::Tower => {
                let q = self.ctx.order();
                self.coeffs
                    .iter()
                    .all(|&c| c < q)
                    .then(|| Self::from_codes(&self.ctx, Level::Base, self.coeffs.clone()))
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ctx, self.level);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Canonical order: by degree, then lexicographically on coefficient
    /// encodings from the constant term up.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }

    /// Coefficients low-to-high as digit vectors (the JSON form).
    pub fn to_digit_vectors(&self) -> Vec<Vec<u64>> {
        self.coefficients()
            .into_iter()
            .map(|c| self.ctx.digits(c))
            .collect()
    }
}

/// Reduces `v` modulo `m` in place, leaving `deg m` coefficients (not trimmed).
pub(crate) fn reduce_in_place(ops: Ops<'_>, v: &mut Vec<u64>, m: &[u64]) {
    let dg = m.len() - 1;
    if v.len() <= dg {
        return;
    }
    let lc = m[dg];
    let inv_lc = if lc == 1 { 1 } else { ops.inv(lc) };
    for i in (dg..v.len()).rev() {
        let c = v[i];
        if c == 0 {
            continue;
        }
        let factor = ops.neg(ops.mul(c, inv_lc));
        ops.axpy(&mut v[i - dg..=i], m, factor);
    }
    v.truncate(dg);
}

impl fmt::Display for Polynomial {
    /// Descending powers, e.g. `X^4 + 2*X + 1` or `X^2 + (a+2)*X + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeff(i);
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let text = self.ctx.format(c);
            let coeff = if self.ctx.element_terms(c) > 1 {
                format!("({text})")
            } else {
                text
            };
            match i {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if c.code() != 1 {
                        write!(f, "{coeff}*")?;
                    }
                    if i == 1 {
                        write!(f, "X")?;
                    } else {
                        write!(f, "X^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self} over {}", self.ctx)?;
        if self.level == Level::Tower {
            write!(f, "^2")?;
        }
        write!(f, ")")
    }
}

macro_rules! panicking_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;

            /// # Panics
            /// If the operands belong to different fields or levels.
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs)
                    .expect("polynomial operands from different rings")
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        let ops = self.ops();
        self.with_coeffs(self.coeffs.iter().map(|&c| ops.neg(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldCtx {
        FieldCtx::new(3, 1, None).unwrap()
    }

    fn f9() -> FieldCtx {
        FieldCtx::new(3, 2, None).unwrap()
    }

    #[test]
    fn phi8_product() {
        let ctx = f3();
        let a = Polynomial::from_ints(&ctx, &[2, 1, 1]);
        let b = Polynomial::from_ints(&ctx, &[2, 2, 1]);
        assert_eq!(&a * &b, Polynomial::from_ints(&ctx, &[1, 0, 0, 0, 1]));
        assert_eq!(&a * &Polynomial::one(&ctx, Level::Base), a);
        let s = Polynomial::from_ints(&ctx, &[1, 1]);
        let t = Polynomial::from_ints(&ctx, &[2, 2]);
        assert!((&s + &t).is_zero());
    }

    #[test]
    fn division() {
        let ctx = f3();
        let x8 = Polynomial::x_pow_minus_one(&ctx, 8);
        let x4p1 = Polynomial::from_ints(&ctx, &[1, 0, 0, 0, 1]);
        let (q, r) = x8.divmod(&x4p1).unwrap();
        assert_eq!(q, Polynomial::x_pow_minus_one(&ctx, 4));
        assert!(r.is_zero());

        let f = Polynomial::from_ints(&ctx, &[1, 0, 1]);
        let (q, r) = f.divmod(&Polynomial::one(&ctx, Level::Base)).unwrap();
        assert_eq!((q, r.is_zero()), (f.clone(), true));

        let (q, r) = f.divmod(&Polynomial::from_ints(&ctx, &[1, 1])).unwrap();
        assert_eq!(q, Polynomial::from_ints(&ctx, &[2, 1]));
        assert_eq!(r, Polynomial::from_ints(&ctx, &[2]));

        assert_eq!(
            f.divmod(&Polynomial::zero(&ctx, Level::Base)).unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn gcds() {
        let ctx = f3();
        let g = Polynomial::x_pow_minus_one(&ctx, 4)
            .gcd(&Polynomial::x_pow_minus_one(&ctx, 2))
            .unwrap();
        assert_eq!(g, Polynomial::from_ints(&ctx, &[2, 0, 1]));
        let f = Polynomial::from_ints(&ctx, &[1, 0, 2]);
        assert_eq!(
            f.gcd(&Polynomial::zero(&ctx, Level::Base)).unwrap(),
            f.monic()
        );
        let z = Polynomial::zero(&ctx, Level::Base);
        assert_eq!(z.gcd(&z).unwrap_err(), Error::UndefinedGcd);
        let phi7 = Polynomial::from_ints(&ctx, &[1; 7]);
        assert!(phi7.gcd(&phi7.derivative()).unwrap().is_one());
    }

    #[test]
    fn inflation_and_weight() {
        let ctx = f3();
        let f = Polynomial::from_ints(&ctx, &[2, 1, 1]);
        assert_eq!(f.inflate(2), Polynomial::from_ints(&ctx, &[2, 0, 1, 0, 1]));
        assert_eq!(f.inflate(1), f);
        assert_eq!(
            Polynomial::from_ints(&ctx, &[-1, 1]).inflate(5),
            Polynomial::x_pow_minus_one(&ctx, 5)
        );
        assert_eq!(Polynomial::from_ints(&ctx, &[1, 0, 0, 0, 1]).weight(), 2);
        assert_eq!(f.weight(), 3);
        assert_eq!(Polynomial::from_ints(&ctx, &[1; 7]).weight(), 7);
    }

    #[test]
    fn evaluation() {
        let ctx = f3();
        let xi = ctx.find_root_of_unity(Level::Tower, 4).unwrap();
        let f = Polynomial::from_ints(&ctx, &[1, 0, 1]);
        assert!(f.eval(xi).unwrap().is_zero());
        assert_eq!(f.eval(ctx.scalar(0)).unwrap(), ctx.scalar(1));

        let ctx = f9();
        // X^2 + (a+2)X + 1
        let c = ctx.element_from_digits(Level::Base, &[2, 1]).unwrap();
        let f = Polynomial::from_elements(&ctx, Level::Base, &[ctx.scalar(1), c, ctx.scalar(1)])
            .unwrap();
        let roots: Vec<_> = (1..81)
            .map(|code| ctx.element(Level::Tower, code).unwrap())
            .filter(|&z| f.eval(z).unwrap().is_zero())
            .collect();
        assert_eq!(roots.len(), 2);
        for z in roots {
            assert_eq!(ctx.element_order(z).unwrap(), 5);
        }
    }

    #[test]
    fn rendering() {
        let ctx = f3();
        assert_eq!(
            Polynomial::from_ints(&ctx, &[1, 2, 0, 0, 1]).to_string(),
            "X^4 + 2*X + 1"
        );
        assert_eq!(Polynomial::from_ints(&ctx, &[2, 1]).to_string(), "X + 2");
        let ctx = f9();
        let c = ctx.element_from_digits(Level::Base, &[2, 1]).unwrap();
        let f = Polynomial::from_elements(&ctx, Level::Base, &[ctx.scalar(1), c, ctx.scalar(1)])
            .unwrap();
        assert_eq!(f.to_string(), "X^2 + (a+2)*X + 1");
        assert_eq!(
            f.to_digit_vectors(),
            vec![vec![1, 0], vec![2, 1], vec![1, 0]]
        );
        let back =
            Polynomial::from_digit_vectors(&ctx, Level::Base, &f.to_digit_vectors()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn context_mismatch() {
        let a = Polynomial::one(&f3(), Level::Base);
        let b = Polynomial::one(&f9(), Level::Base);
        assert_eq!(a.try_mul(&b).unwrap_err(), Error::ContextMismatch);
    }

    #[test]
    fn canonical_order() {
        let ctx = f3();
        let mut v = [
            Polynomial::from_ints(&ctx, &[2, 2, 1]),
            Polynomial::from_ints(&ctx, &[2, 1]),
            Polynomial::from_ints(&ctx, &[1, 0, 1]),
            Polynomial::from_ints(&ctx, &[1, 1]),
            Polynomial::from_ints(&ctx, &[2, 1, 1]),
        ];
        v.sort_by(Polynomial::canonical_cmp);
        let text: Vec<_> = v.iter().map(|p| p.to_string()).collect();
        assert_eq!(
            text,
            ["X + 1", "X + 2", "X^2 + 1", "X^2 + X + 2", "X^2 + 2*X + 2"]
        );
    }
}
