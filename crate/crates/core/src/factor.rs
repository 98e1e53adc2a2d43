//! General-purpose factorization over `F_q`: squarefree decomposition,
//! distinct-degree factorization and Cantor–Zassenhaus equal-degree
//! splitting.
//!
//! This path knows nothing about cyclotomic structure and serves as the
//! oracle for the structured factorizations in [`crate::sparsity`].

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement, Level};
use crate::poly::{reduce_in_place, Polynomial};

/// A unit times a product of monic irreducible powers, canonically ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    ctx: FieldCtx,
    unit: FieldElement,
    factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    /// Sorts factors canonically and merges repeated ones.
    pub fn new(ctx: &FieldCtx, unit: FieldElement, factors: Vec<(Polynomial, u32)>) -> Self {
        let mut factors = factors;
        factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        let mut merged: Vec<(Polynomial, u32)> = Vec::with_capacity(factors.len());
        for (p, m) in factors {
            match merged.last_mut() {
                Some((last, lm)) if last.canonical_cmp(&p) == Ordering::Equal => *lm += m,
                _ => merged.push((p, m)),
            }
        }
        Factorization {
            ctx: ctx.clone(),
            unit,
            factors: merged,
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn unit(&self) -> FieldElement {
        self.unit
    }

    pub fn factors(&self) -> &[(Polynomial, u32)] {
        &self.factors
    }

    /// Number of distinct irreducible factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn max_weight(&self) -> usize {
        self.factors
            .iter()
            .map(|(p, _)| p.weight())
            .max()
            .unwrap_or(0)
    }

    /// Factor degrees with multiplicity, ascending.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|(p, m)| std::iter::repeat_n(p.degree().unwrap_or(0), *m as usize))
            .collect();
        d.sort_unstable();
        d
    }

    /// `unit * prod factor^multiplicity`.
    pub fn product(&self) -> Polynomial {
        self.factors
            .iter()
            .fold(Polynomial::constant(&self.ctx, self.unit), |acc, (p, m)| {
                &acc * &p.pow(*m as u64)
            })
    }
}

/// Arithmetic in `F_q[X]/(f)` for monic `f`, with the Frobenius map
/// `h -> h^q` precomputed as a matrix.
struct ModRing {
    modulus: Polynomial,
    frobenius_rows: Vec<Vec<u64>>,
}

impl ModRing {
    fn new(modulus: &Polynomial) -> Self {
        debug_assert!(modulus.is_monic());
        let n = modulus.degree().expect("nonzero modulus");
        let ctx = modulus.ctx();
        let q = ctx.order();
        let ops = modulus.ops();
        let m = modulus.codes();
        let mut rows = Vec::with_capacity(n);
        let mut row = vec![0u64; n.max(1)];
        row[0] = 1;
        let xq = if q as usize > 2 * n {
            Some(Self::reduce(
                modulus,
                Polynomial::x(ctx, Level::Base).pow_mod(q, modulus),
            ))
        } else {
            None
        };
        for _ in 0..n {
            rows.push(row.clone());
            match &xq {
                None => {
                    // Multiply by X, q times.
                    for _ in 0..q {
                        let top = row[n - 1];
                        row.rotate_right(1);
                        row[0] = 0;
                        if top != 0 {
                            ops.axpy(&mut row, &m[..n], ops.neg(top));
                        }
                    }
                }
                Some(xq) => row = Self::mulmod_codes(modulus, &row, xq),
            }
        }
        ModRing {
            modulus: modulus.clone(),
            frobenius_rows: rows,
        }
    }

    fn reduce(modulus: &Polynomial, p: Polynomial) -> Vec<u64> {
        let n = modulus.degree().unwrap();
        let mut v = p.codes().to_vec();
        reduce_in_place(modulus.ops(), &mut v, modulus.codes());
        v.resize(n, 0);
        v
    }

    fn mulmod_codes(modulus: &Polynomial, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = modulus.degree().unwrap();
        let ops = modulus.ops();
        let mut out = vec![0u64; a.len() + b.len()];
        for (i, &c) in a.iter().enumerate() {
            ops.axpy(&mut out[i..], b, c);
        }
        reduce_in_place(ops, &mut out, modulus.codes());
        out.resize(n, 0);
        out
    }

    fn poly(&self, codes: Vec<u64>) -> Polynomial {
        Polynomial::from_codes(self.modulus.ctx(), Level::Base, codes)
    }

    fn mulmod(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.poly(Self::mulmod_codes(&self.modulus, a.codes(), b.codes()))
    }

    fn frobenius(&self, a: &Polynomial) -> Polynomial {
        let n = self.frobenius_rows.len();
        let ops = self.modulus.ops();
        let mut out = vec![0u64; n];
        for (&c, row) in a.codes().iter().zip(&self.frobenius_rows) {
            ops.axpy(&mut out, row, c);
        }
        self.poly(out)
    }

    fn pow(&self, a: &Polynomial, mut e: u64) -> Polynomial {
        let mut acc = Polynomial::one(self.modulus.ctx(), Level::Base);
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mulmod(&base, &base);
            }
        }
        acc
    }
}

impl Polynomial {
    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::one(self.ctx(), self.level())
            .rem(modulus)
            .unwrap();
        let mut base = self.rem(modulus).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(modulus).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(modulus).unwrap();
            }
        }
        acc
    }
}

fn require_base(f: &Polynomial) -> Result<()> {
    if f.level() != Level::Base {
        return Err(Error::LevelMismatch);
    }
    Ok(())
}

/// True iff `f` is nonconstant with no repeated factor.
pub fn is_squarefree(f: &Polynomial) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(_) => {
            let d = f.derivative();
            !d.is_zero() && f.gcd(&d).map(|g| g.is_one()).unwrap_or(false)
        }
    }
}

/// Rabin-style test via distinct-degree factorization; works in every
/// characteristic.
pub fn is_irreducible(f: &Polynomial) -> bool {
    match f.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(n) => {
            let f = f.monic();
            is_squarefree(&f) && matches!(distinct_degree(&f).as_deref(), Ok([(d, _)]) if *d == n)
        }
    }
}

/// `g(X)` with `g(X^r) = f(X)` over `F_q`, taking `r`-th roots of the
/// coefficients.
fn char_root(f: &Polynomial) -> Polynomial {
    let ctx = f.ctx();
    let r = ctx.characteristic() as usize;
    let root_exp = ctx.order() / ctx.characteristic();
    let ops = f.ops();
    let codes: Vec<u64> = f
        .codes()
        .iter()
        .step_by(r)
        .map(|&c| ops.pow(c, root_exp))
        .collect();
    Polynomial::from_codes(ctx, f.level(), codes)
}

/// Squarefree decomposition: pairs `(g, m)` with `monic(f) = prod g^m`, each
/// `g` squarefree and the `g` pairwise coprime. Sorted by multiplicity.
pub fn squarefree_decompose(f: &Polynomial) -> Result<Vec<(Polynomial, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    require_base(f)?;
    let mut out = Vec::new();
    sqf_rec(&f.monic(), 1, &mut out)?;
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.canonical_cmp(&b.0)));
    Ok(out)
}

fn sqf_rec(f: &Polynomial, scale: u32, out: &mut Vec<(Polynomial, u32)>) -> Result<()> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(());
    }
    let r = f.ctx().characteristic() as u32;
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let z = w.exact_div(&y)?;
        if !z.is_one() {
            out.push((z, i * scale));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w)?;
    }
    if !c.is_one() {
        sqf_rec(&char_root(&c), scale * r, out)?;
    }
    Ok(())
}

/// Groups the irreducible factors of a squarefree monic `f` by degree:
/// pairs `(d, product of all degree-d factors)`, ascending in `d`.
pub fn distinct_degree(f: &Polynomial) -> Result<Vec<(usize, Polynomial)>> {
    require_base(f)?;
    if !f.is_monic() || !is_squarefree(f) {
        return Err(Error::NotSquarefree);
    }
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut ring = ModRing::new(&rest);
    let x = Polynomial::x(f.ctx(), Level::Base);
    let mut h = x.rem(&rest)?;
    let mut d = 0usize;
    loop {
        let deg = rest.degree().unwrap();
        if deg == 0 {
            break;
        }
        d += 1;
        if 2 * d > deg {
            out.push((deg, rest));
            break;
        }
        h = ring.frobenius(&h);
        let g = rest.gcd(&(&h - &x))?;
        if !g.is_one() {
            rest = rest.exact_div(&g)?;
            out.push((d, g));
            let new_deg = rest.degree().unwrap();
            if new_deg > 0 {
                h = h.rem(&rest)?;
                if 2 * new_deg <= ring.modulus.degree().unwrap() {
                    ring = ModRing::new(&rest);
                }
            }
        }
    }
    Ok(out)
}

/// Splits a product of distinct monic irreducibles of common degree `d`
/// into its factors, canonically ordered. Random elements come from a
/// ChaCha generator seeded with `seed`.
pub fn equal_degree_split(f: &Polynomial, d: usize, seed: u64) -> Result<Vec<Polynomial>> {
    require_base(f)?;
    let ctx = f.ctx();
    if !ctx.is_odd() {
        return Err(Error::EvenCharacteristicUnsupported);
    }
    let f = f.monic();
    let n = f.degree().ok_or(Error::NotEqualDegree(d))?;
    if d == 0 || n == 0 || n % d != 0 || !is_squarefree(&f) {
        return Err(Error::NotEqualDegree(d));
    }
    if n == d {
        return Ok(vec![f]);
    }
    // Every factor degree must divide d: X^{q^d} = X mod f.
    let ring = ModRing::new(&f);
    let x = Polynomial::x(ctx, Level::Base);
    let mut h = x.clone();
    for _ in 0..d {
        h = ring.frobenius(&h);
    }
    if h != x {
        return Err(Error::NotEqualDegree(d));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = ctx.order();
    let one = Polynomial::one(ctx, Level::Base);
    let mut out = Vec::new();
    let mut pending = vec![f];
    while !pending.is_empty() {
        // a^{(q^d - 1)/2} = (a * a^q * ... * a^{q^(d-1)})^{(q-1)/2}, computed
        // once modulo the full product and shared by every pending factor.
        let codes: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let a = Polynomial::from_codes(ctx, Level::Base, codes);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut conj = a.clone();
        let mut norm = a;
        for _ in 1..d {
            conj = ring.frobenius(&conj);
            norm = ring.mulmod(&norm, &conj);
        }
        let b = &ring.pow(&norm, (q - 1) / 2) - &one;
        let mut next = Vec::new();
        for g in pending {
            let h = g.gcd(&b)?;
            let dh = h.degree().unwrap_or(0);
            let parts = if dh > 0 && dh < g.degree().unwrap() {
                let other = g.exact_div(&h)?;
                vec![h, other]
            } else {
                vec![g]
            };
            for part in parts {
                if part.degree() == Some(d) {
                    out.push(part);
                } else {
                    next.push(part);
                }
            }
        }
        pending = next;
    }
    out.sort_by(Polynomial::canonical_cmp);
    Ok(out)
}

/// Complete factorization: squarefree decomposition, then distinct-degree
/// factorization, then equal-degree splitting.
pub fn factor(f: &Polynomial, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    require_base(f)?;
    let ctx = f.ctx();
    if !ctx.is_odd() {
        return Err(Error::EvenCharacteristicUnsupported);
    }
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decompose(f)? {
        for (d, block) in distinct_degree(&part)? {
            for g in equal_degree_split(&block, d, seed)? {
                factors.push((g, mult));
            }
        }
    }
    Ok(Factorization::new(ctx, f.leading(), factors))
}

/// A seeded random monic irreducible polynomial of the given degree.
pub fn random_irreducible(ctx: &FieldCtx, degree: usize, rng: &mut impl Rng) -> Polynomial {
    assert!(degree >= 1);
    loop {
        let mut codes: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..ctx.order())).collect();
        codes.push(1);
        let f = Polynomial::from_codes(ctx, Level::Base, codes);
        if is_irreducible(&f) {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldCtx {
        FieldCtx::new(3, 1, None).unwrap()
    }

    fn p(ctx: &FieldCtx, c: &[i64]) -> Polynomial {
        Polynomial::from_ints(ctx, c)
    }

    #[test]
    fn squarefree_examples() {
        let ctx = f3();
        let sqf = squarefree_decompose(&Polynomial::x_pow_minus_one(&ctx, 6)).unwrap();
        assert_eq!(sqf, vec![(p(&ctx, &[2, 0, 1]), 3)]);
        let sqf = squarefree_decompose(&Polynomial::x_pow_minus_one(&ctx, 4)).unwrap();
        assert_eq!(sqf, vec![(p(&ctx, &[2, 0, 0, 0, 1]), 1)]);
        let f = p(&ctx, &[1, 0, 2]);
        assert_eq!(squarefree_decompose(&f).unwrap(), vec![(f.monic(), 1)]);
        assert_eq!(
            squarefree_decompose(&Polynomial::zero(&ctx, Level::Base)).unwrap_err(),
            Error::ZeroPolynomial
        );
        // (X+1)^2 (X+2)^9 over F_3
        let f = &p(&ctx, &[1, 1]).pow(2) * &p(&ctx, &[2, 1]).pow(9);
        assert_eq!(
            squarefree_decompose(&f).unwrap(),
            vec![(p(&ctx, &[1, 1]), 2), (p(&ctx, &[2, 1]), 9)]
        );
    }

    #[test]
    fn ddf_examples() {
        let ctx = f3();
        let x4p1 = p(&ctx, &[1, 0, 0, 0, 1]);
        assert_eq!(distinct_degree(&x4p1).unwrap(), vec![(2, x4p1.clone())]);
        let lin = p(&ctx, &[2, 1]);
        assert_eq!(distinct_degree(&lin).unwrap(), vec![(1, lin.clone())]);
        let phi7 = p(&ctx, &[1; 7]);
        assert_eq!(distinct_degree(&phi7).unwrap(), vec![(6, phi7.clone())]);
        assert_eq!(
            distinct_degree(&p(&ctx, &[1, 2, 1])).unwrap_err(),
            Error::NotSquarefree
        );
    }

    #[test]
    fn edf_examples() {
        let ctx = f3();
        let split = equal_degree_split(&p(&ctx, &[1, 0, 0, 0, 1]), 2, 0).unwrap();
        assert_eq!(split, vec![p(&ctx, &[2, 1, 1]), p(&ctx, &[2, 2, 1])]);
        let irr = p(&ctx, &[2, 1, 1]);
        assert_eq!(equal_degree_split(&irr, 2, 7).unwrap(), vec![irr.clone()]);
        let split = equal_degree_split(&Polynomial::x_pow_minus_one(&ctx, 2), 1, 0).unwrap();
        assert_eq!(split, vec![p(&ctx, &[1, 1]), p(&ctx, &[2, 1])]);
        assert_eq!(
            equal_degree_split(&p(&ctx, &[1; 7]), 3, 0).unwrap_err(),
            Error::NotEqualDegree(3)
        );
    }

    #[test]
    fn factor_examples() {
        let ctx = f3();
        let fac = factor(&Polynomial::x_pow_minus_one(&ctx, 8), 0).unwrap();
        let text: Vec<_> = fac.factors().iter().map(|(g, _)| g.to_string()).collect();
        assert_eq!(
            text,
            ["X + 1", "X + 2", "X^2 + 1", "X^2 + X + 2", "X^2 + 2*X + 2"]
        );
        assert_eq!(fac.product(), Polynomial::x_pow_minus_one(&ctx, 8));

        let fac = factor(&Polynomial::x_pow_minus_one(&ctx, 1), 0).unwrap();
        assert_eq!(fac.factors(), &[(p(&ctx, &[2, 1]), 1)]);

        let f9 = FieldCtx::new(3, 2, None).unwrap();
        let fac = factor(&Polynomial::x_pow_minus_one(&f9, 5), 0).unwrap();
        let text: Vec<_> = fac.factors().iter().map(|(g, _)| g.to_string()).collect();
        assert_eq!(text, ["X + 2", "X^2 + (a+2)*X + 1", "X^2 + (2*a+2)*X + 1"]);
    }

    #[test]
    fn non_monic_and_repeated_input() {
        let ctx = FieldCtx::new(5, 1, None).unwrap();
        let f = &(&p(&ctx, &[1, 1]).pow(3) * &p(&ctx, &[2, 0, 1])).scale(ctx.scalar(3))
            * &Polynomial::x_pow_minus_one(&ctx, 10);
        let fac = factor(&f, 0).unwrap();
        assert_eq!(fac.unit(), ctx.scalar(3));
        assert_eq!(fac.product(), f);
        for (g, _) in fac.factors() {
            assert!(is_irreducible(g));
        }
    }

    #[test]
    fn determinism_across_seeds_gives_same_set() {
        let ctx = FieldCtx::new(7, 1, None).unwrap();
        let f = Polynomial::x_pow_minus_one(&ctx, 48);
        let a = factor(&f, 0).unwrap();
        assert_eq!(a, factor(&f, 0).unwrap());
        assert_eq!(a, factor(&f, 12345).unwrap());
    }

    #[test]
    fn even_characteristic_refused() {
        let ctx = FieldCtx::new(2, 2, None).unwrap();
        assert_eq!(
            factor(&Polynomial::x_pow_minus_one(&ctx, 3), 0).unwrap_err(),
            Error::EvenCharacteristicUnsupported
        );
        // Irreducibility testing still works there; F_4 holds the cube roots of unity.
        assert!(!is_irreducible(&Polynomial::from_ints(&ctx, &[1, 1, 1])));
        let f2 = FieldCtx::new(2, 1, None).unwrap();
        assert!(is_irreducible(&Polynomial::from_ints(&f2, &[1, 1, 1])));
        assert!(!is_irreducible(&Polynomial::from_ints(&f2, &[1, 0, 1])));
    }
}
