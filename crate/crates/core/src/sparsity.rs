//! 3-sparsity of `X^n - 1` over odd-characteristic `F_q`.
//!
//! For `n` prime to the characteristic, `X^n - 1` has only binomial and
//! trinomial irreducible factors exactly when every prime factor of `n`
//! divides `q^2 - 1`. In that case each cyclotomic factor `Phi_d` of
//! `X^n - 1` is assembled from a "capped" divisor `d0` whose order
//! `ord_{d0}(q)` is 1 or 2: the roots of `Phi_{d0}` pair up under
//! Frobenius into linear or quadratic factors, and substituting
//! `X -> X^{d/d0}` keeps them irreducible. Otherwise some `Phi_p` has an
//! irreducible factor of weight at least four.

use std::collections::BTreeMap;

use crate::cyclotomic::cyclotomic_poly;
use crate::error::{Error, Result};
use crate::factor::{factor, is_irreducible, Factorization};
use crate::field::{FieldCtx, FieldElement, Level};
use crate::orders::{divisors, factorize, gcd, is_prime, ord_general, vp};
use crate::poly::Polynomial;

/// Outcome of the sparsity criterion together with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityReport {
    pub q: u64,
    pub n: u64,
    pub sparse: bool,
    /// The prime factorization of `q^2 - 1`.
    pub base_primes: BTreeMap<u64, u32>,
    /// Smallest prime of `n` not dividing `q^2 - 1`.
    pub offending_prime: Option<u64>,
    /// `v_r(n)`; nonzero values put `n` outside the criterion's hypothesis.
    pub r_part: u32,
}

impl SparsityReport {
    /// Evaluates the criterion for any `n >= 1`, recording `v_r(n)` rather
    /// than rejecting it.
    pub fn diagnose(ctx: &FieldCtx, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let base_primes = prime_base(ctx.order())?;
        let r_part = vp(ctx.characteristic(), n);
        let offending_prime = factorize(n)
            .into_iter()
            .map(|(p, _)| p)
            .find(|p| *p != ctx.characteristic() && !base_primes.contains_key(p));
        Ok(SparsityReport {
            q: ctx.order(),
            n,
            sparse: offending_prime.is_none() && r_part == 0,
            base_primes,
            offending_prime,
            r_part,
        })
    }

    /// `n / r^{v_r(n)}`.
    pub fn coprime_part(&self, r: u64) -> u64 {
        self.n / r.pow(self.r_part)
    }
}

/// Bookkeeping for one divisor `d = d0 * inflation` of a sparse `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorPlan {
    pub d: u64,
    /// `prod p^{min(v_p(d), v_p(q^2 - 1))}`.
    pub d0: u64,
    /// `ord_{d0}(q)`, always 1 or 2.
    pub t0: u64,
    /// `d / d0`.
    pub inflation: u64,
}

fn require_odd(ctx: &FieldCtx) -> Result<()> {
    if !ctx.is_odd() {
        return Err(Error::EvenCharacteristicUnsupported);
    }
    Ok(())
}

fn char_divides_n(ctx: &FieldCtx, n: u64) -> Error {
    let r = ctx.characteristic();
    let r_part = vp(r, n);
    Error::CharacteristicDividesN {
        r,
        n,
        r_part,
        coprime_part: n / r.pow(r_part),
    }
}

/// `{p: v_p(q^2 - 1)}` for odd prime powers `q`, including `p = 2`.
pub fn prime_base(q: u64) -> Result<BTreeMap<u64, u32>> {
    match crate::orders::prime_power_parts(q) {
        None => Err(Error::InvalidCharacteristic(q)),
        Some((2, _)) => Err(Error::EvenCharacteristicUnsupported),
        Some(_) => {
            let q2m1 = (q as u128 * q as u128 - 1) as u64;
            Ok(factorize(q2m1).into_iter().collect())
        }
    }
}

/// Decides 3-sparsity of `X^n - 1` from the prime factors of `n`.
pub fn is_sparse_theorem(ctx: &FieldCtx, n: u64) -> Result<SparsityReport> {
    require_odd(ctx)?;
    let report = SparsityReport::diagnose(ctx, n)?;
    if report.r_part > 0 {
        return Err(char_divides_n(ctx, n));
    }
    Ok(report)
}

/// Decides 3-sparsity by factoring `X^n - 1` outright.
pub fn is_sparse_oracle(ctx: &FieldCtx, n: u64, seed: u64) -> Result<bool> {
    require_odd(ctx)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n.is_multiple_of(ctx.characteristic()) {
        return Err(char_divides_n(ctx, n));
    }
    let fac = factor(&Polynomial::x_pow_minus_one(ctx, n as usize), seed)?;
    Ok(fac.max_weight() <= 3)
}

/// Splits `d` into the capped part `d0` (each prime exponent limited to
/// `v_p(q^2 - 1)`) and the inflation exponent `d / d0`.
pub fn plan_divisor(ctx: &FieldCtx, d: u64) -> Result<FactorPlan> {
    require_odd(ctx)?;
    if d == 0 {
        return Err(Error::InvalidArgument("divisor must be positive".into()));
    }
    let r = ctx.characteristic();
    if d.is_multiple_of(r) {
        return Err(Error::CharacteristicDividesIndex { r, d });
    }
    let q = ctx.order();
    let base = prime_base(q)?;
    let mut d0 = 1u64;
    for (p, f) in factorize(d) {
        let cap = *base
            .get(&p)
            .ok_or(Error::NotInSparseFamily { value: d, prime: p })?;
        d0 *= p.pow(f.min(cap));
    }
    let inflation = d / d0;
    let t0 = ord_general(q, d0)?;
    if t0 > 2 {
        return Err(Error::Inconsistent(format!(
            "ord_{d0}({q}) = {t0} exceeds 2"
        )));
    }
    let full = ord_general(q, d)?;
    if full != t0 * inflation {
        return Err(Error::Inconsistent(format!(
            "ord_{d}({q}) = {full}, expected {t0} * {inflation}"
        )));
    }
    Ok(FactorPlan {
        d,
        d0,
        t0,
        inflation,
    })
}

/// Irreducible factorization of `Phi_d` built from roots of unity of order
/// `d0` and inflation by `d / d0`.
pub fn factor_cyclotomic_structured(ctx: &FieldCtx, d: u64) -> Result<Factorization> {
    let plan = plan_divisor(ctx, d)?;
    let d0 = plan.d0;
    let q = ctx.order();
    let level = if plan.t0 == 1 {
        Level::Base
    } else {
        Level::Tower
    };
    let zeta = ctx.find_root_of_unity(level, d0)?;
    let power = |i: u64| ctx.pow(zeta, i);
    let to_base = |x: FieldElement| {
        ctx.project(x).ok_or_else(|| {
            Error::Inconsistent(format!("{} is not fixed by Frobenius", ctx.format(x)))
        })
    };
    let x = Polynomial::x(ctx, Level::Base);
    let mut consumed = vec![false; d0 as usize];
    let mut factors = Vec::new();
    for i in 0..d0 {
        if consumed[i as usize] || gcd(i, d0) != 1 {
            continue;
        }
        consumed[i as usize] = true;
        let small = if plan.t0 == 1 {
            &x - &Polynomial::constant(ctx, power(i))
        } else {
            let j = (i as u128 * q as u128 % d0 as u128) as u64;
            consumed[j as usize] = true;
            let trace = to_base(ctx.add(power(i), power(j))?)?;
            let norm = to_base(power(i + j))?;
            Polynomial::from_elements(
                ctx,
                Level::Base,
                &[norm, ctx.neg(trace), FieldElement::one(Level::Base)],
            )?
        };
        factors.push((small.inflate(plan.inflation as usize), 1));
    }
    Ok(Factorization::new(
        ctx,
        FieldElement::one(Level::Base),
        factors,
    ))
}

/// Irreducible factorization of `X^n - 1` for sparse `n`, as the union of
/// the structured factorizations of `Phi_d` over `d | n`.
pub fn factor_xn1_structured(ctx: &FieldCtx, n: u64) -> Result<Factorization> {
    let report = is_sparse_theorem(ctx, n)?;
    if let Some(prime) = report.offending_prime {
        return Err(Error::NotInSparseFamily { value: n, prime });
    }
    let mut factors = Vec::new();
    for d in divisors(n) {
        factors.extend(
            factor_cyclotomic_structured(ctx, d)?
                .factors()
                .iter()
                .cloned(),
        );
    }
    Ok(Factorization::new(
        ctx,
        FieldElement::one(Level::Base),
        factors,
    ))
}

/// Whether `X^m - a` divides `X^n - 1`, decided as `m * ord(a) | n`.
pub fn binomial_divides(ctx: &FieldCtx, m: u64, a: FieldElement, n: u64) -> Result<bool> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("m and n must be positive".into()));
    }
    if a.level() != Level::Base {
        return Err(Error::LevelMismatch);
    }
    let order = ctx.element_order(a)?;
    Ok(n.is_multiple_of(m * order))
}

/// Monic minimal polynomial of `beta` in the field `F_q[Y]/(f)`, by finding
/// the first linear dependency among `1, beta, beta^2, ...`.
fn minimal_polynomial(f: &Polynomial, beta: &Polynomial) -> Polynomial {
    let ctx = f.ctx();
    let m = f.degree().unwrap();
    let ops = ctx.ops(Level::Base);
    let dense = |p: &Polynomial| {
        let mut v = p.codes().to_vec();
        v.resize(m, 0);
        v
    };
    // Rows: (vector, combination of powers, pivot), vector[pivot] = 1.
    let mut basis: Vec<(Vec<u64>, Vec<u64>, usize)> = Vec::new();
    let mut current = Polynomial::one(ctx, Level::Base);
    for j in 0..=m {
        let mut v = dense(&current);
        let mut comb = vec![0u64; m + 1];
        comb[j] = 1;
        for (bv, bc, piv) in &basis {
            let c = v[*piv];
            if c != 0 {
                let neg = ops.neg(c);
                ops.axpy(&mut v, bv, neg);
                ops.axpy(&mut comb, bc, neg);
            }
        }
        match v.iter().position(|&c| c != 0) {
            None => return Polynomial::from_codes(ctx, Level::Base, comb),
            Some(piv) => {
                let inv = ops.inv(v[piv]);
                v.iter_mut().for_each(|c| *c = ops.mul(*c, inv));
                comb.iter_mut().for_each(|c| *c = ops.mul(*c, inv));
                basis.push((v, comb, piv));
            }
        }
        current = (&current * beta).rem(f).unwrap();
    }
    unreachable!("m + 1 vectors in an m-dimensional space are dependent")
}

/// Characteristic polynomial over `F_q` of `alpha^t`, where `alpha` is a
/// root of the monic irreducible `f`.
///
/// Since `F_q[Y]/(f)` is a field, this is the minimal polynomial of
/// `Y^t mod f` raised to `deg f / deg minpoly`.
pub fn char_poly_power(f: &Polynomial, t: u64) -> Result<Polynomial> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    if f.level() != Level::Base || !f.is_monic() || !is_irreducible(f) {
        return Err(Error::NotIrreducible);
    }
    let m = f.degree().unwrap();
    let beta = Polynomial::x(f.ctx(), Level::Base).pow_mod(t, f);
    let min = minimal_polynomial(f, &beta);
    Ok(min.pow((m / min.degree().unwrap()) as u64))
}

/// The characteristic polynomial of `alpha^2` for a root `alpha` of the
/// trinomial `X^t + a*X + b`, written out coefficient by coefficient:
/// `X^t + 2b X^{t/2} - a^2 X + b^2` for even `t` and
/// `X^t + 2a X^{(t+1)/2} + a^2 X - b^2` for odd `t`.
pub fn trinomial_square_char_poly(
    ctx: &FieldCtx,
    t: usize,
    a: FieldElement,
    b: FieldElement,
) -> Result<Polynomial> {
    if t < 2 {
        return Err(Error::InvalidArgument(
            "trinomial degree must be >= 2".into(),
        ));
    }
    let two = ctx.scalar(2);
    let a2 = ctx.mul(a, a)?;
    let b2 = ctx.mul(b, b)?;
    let mut coeffs = vec![FieldElement::zero(Level::Base); t + 1];
    let mut put = |i: usize, c: FieldElement| -> Result<()> {
        coeffs[i] = ctx.add(coeffs[i], c)?;
        Ok(())
    };
    put(t, FieldElement::one(Level::Base))?;
    if t.is_multiple_of(2) {
        put(t / 2, ctx.mul(two, b)?)?;
        put(1, ctx.neg(a2))?;
        put(0, b2)?;
    } else {
        put(t.div_ceil(2), ctx.mul(two, a)?)?;
        put(1, a2)?;
        put(0, ctx.neg(b2))?;
    }
    Polynomial::from_elements(ctx, Level::Base, &coeffs)
}

/// Splits a trinomial `X^t + a*X + b` with `t >= 2` into `(t, a, b)`.
pub fn as_linear_trinomial(g: &Polynomial) -> Option<(usize, FieldElement, FieldElement)> {
    let t = g.degree()?;
    let (a, b) = (g.coeff(1), g.coeff(0));
    (t >= 2 && g.is_monic() && g.weight() == 3 && !a.is_zero() && !b.is_zero()).then_some((t, a, b))
}

/// An irreducible factor of `X^p - 1` with at least four terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub p: u64,
    pub factor: Polynomial,
    pub weight: usize,
    /// Number of trinomial factors `X^t + aX + b` of `Phi_p` whose squared
    /// characteristic polynomial was checked against the closed form.
    pub closed_form_checks: usize,
}

/// Certifies that `X^p - 1` is not 3-sparse for a prime `p` outside
/// `q^2 - 1`, by factoring `Phi_p` and locating a factor of weight >= 4.
pub fn witness_nonsparse(ctx: &FieldCtx, p: u64, seed: u64) -> Result<Witness> {
    require_odd(ctx)?;
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if p == ctx.characteristic() {
        return Err(char_divides_n(ctx, p));
    }
    if prime_base(ctx.order())?.contains_key(&p) {
        return Err(Error::NoWitnessExists { p });
    }
    let fac = factor(&cyclotomic_poly(ctx, p)?, seed)?;
    let mut closed_form_checks = 0;
    for (g, _) in fac.factors() {
        if let Some((t, a, b)) = as_linear_trinomial(g) {
            if char_poly_power(g, 2)? != trinomial_square_char_poly(ctx, t, a, b)? {
                return Err(Error::Inconsistent(format!(
                    "squared characteristic polynomial of {g} disagrees with its closed form"
                )));
            }
            closed_form_checks += 1;
        }
    }
    let factor = fac
        .factors()
        .iter()
        .map(|(g, _)| g)
        .find(|g| g.weight() >= 4)
        .cloned()
        .ok_or_else(|| Error::Inconsistent(format!("every factor of Phi_{p} has weight <= 3")))?;
    Ok(Witness {
        p,
        weight: factor.weight(),
        factor,
        closed_form_checks,
    })
}

/// All `n <= bound` prime to the characteristic whose prime factors divide
/// `q^2 - 1`, ascending.
pub fn enumerate_sparse(ctx: &FieldCtx, bound: u64) -> Result<Vec<u64>> {
    require_odd(ctx)?;
    let base = prime_base(ctx.order())?;
    Ok((1..=bound)
        .filter(|&n| factorize(n).iter().all(|(p, _)| base.contains_key(p)))
        .collect())
}
