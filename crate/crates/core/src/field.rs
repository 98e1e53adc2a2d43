//! Finite fields `F_q = F_r[Y]/(h)` and their quadratic extension
//! `F_{q^2} = F_q[b]/(b^2 - c)` for a fixed non-square `c`.
//!
//! Elements are stored by their encoding `sum c_i r^i` over the digit vector
//! in the basis `1, Y, ..., Y^{k-1}`. A tower element `u + v*b` is encoded as
//! `code(u) + q * code(v)`, so base elements embed into the tower with the
//! same code.
//!
//! Small fields (at most 2^20 elements) use exponent/logarithm tables with
//! Zech logarithms for addition; larger fields fall back to digit-vector
//! arithmetic. Prime fields use plain modular arithmetic.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::orders::{factorize, gcd, is_prime};

const TABLE_LIMIT: u64 = 1 << 20;
const NO_LOG: u32 = u32::MAX;
/// Fields up to this size also get full addition and multiplication tables.
const DENSE_LIMIT: u64 = 256;

/// Which field an element or polynomial lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    /// `F_q` itself.
    Base,
    /// The quadratic extension `F_{q^2}`.
    Tower,
}

/// An element of `F_q` or `F_{q^2}`, identified by its encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    level: Level,
    code: u64,
}

impl FieldElement {
    pub(crate) const fn new_unchecked(level: Level, code: u64) -> Self {
        FieldElement { level, code }
    }

    pub const fn zero(level: Level) -> Self {
        FieldElement { level, code: 0 }
    }

    pub const fn one(level: Level) -> Self {
        FieldElement { level, code: 1 }
    }

    pub fn level(self) -> Level {
        self.level
    }

    /// Encoding `sum c_i r^i` of the coordinate vector.
    pub fn code(self) -> u64 {
        self.code
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }
}

/// Field operation selector for [`FieldCtx::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

struct Tables {
    group_order: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    /// `log(-1)`; `None` in characteristic 2.
    neg_one_log: Option<u64>,
}

/// Full operation tables indexed by `a * size + b`.
struct Dense {
    size: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
}

impl Tables {
    #[inline]
    fn wrap(&self, e: u64) -> u64 {
        if e >= self.group_order {
            e - self.group_order
        } else {
            e
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[self.wrap(e) as usize] as u64
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let la = self.log[a as usize] as u64;
        let lb = self.log[b as usize] as u64;
        let diff = if lb >= la {
            lb - la
        } else {
            lb + self.group_order - la
        };
        match self.zech[diff as usize] {
            NO_LOG => 0,
            z => self.exp[self.wrap(la + z as u64) as usize] as u64,
        }
    }

    #[inline]
    fn neg(&self, a: u64) -> u64 {
        match self.neg_one_log {
            _ if a == 0 => 0,
            None => a,
            Some(h) => self.exp[self.wrap(self.log[a as usize] as u64 + h) as usize] as u64,
        }
    }

    #[inline]
    fn inv(&self, a: u64) -> u64 {
        let l = self.log[a as usize] as u64;
        self.exp[if l == 0 {
            0
        } else {
            (self.group_order - l) as usize
        }] as u64
    }

    fn pow(&self, a: u64, e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u128 * e as u128 % self.group_order as u128;
        self.exp[l as usize] as u64
    }
}

enum Arith {
    Prime,
    Table(Tables),
    Generic,
}

struct Inner {
    r: u64,
    k: u32,
    q: u64,
    modulus: Vec<u64>,
    nonsquare: Option<u64>,
    base: Arith,
    tower: Option<Arith>,
    base_dense: Option<Dense>,
    tower_dense: Option<Dense>,
    base_group: Vec<(u64, u32)>,
    tower_group: Vec<(u64, u32)>,
    cyclotomic_memo: Mutex<HashMap<u64, Vec<u64>>>,
}

/// An immutable description of `F_q` (and `F_{q^2}` for odd `q`).
///
/// Cloning is cheap; all clones share the same tables and cyclotomic cache.
#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.r == other.inner.r
                && self.inner.k == other.inner.k
                && self.inner.modulus == other.inner.modulus
                && self.inner.nonsquare == other.inner.nonsquare)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("r", &self.inner.r)
            .field("k", &self.inner.k)
            .field("modulus", &self.inner.modulus)
            .field("tower_nonsquare", &self.inner.nonsquare)
            .finish()
    }
}

fn merge_factorizations(a: Vec<(u64, u32)>, b: Vec<(u64, u32)>) -> Vec<(u64, u32)> {
    let mut map = std::collections::BTreeMap::new();
    for (p, e) in a.into_iter().chain(b) {
        *map.entry(p).or_insert(0) += e;
    }
    map.into_iter().collect()
}

impl FieldCtx {
    /// Builds `F_{r^k}`.
    ///
    /// Without an explicit modulus the monic irreducible of degree `k` with
    /// the smallest encoding of its lower coefficients is used; for `k = 1`
    /// the modulus is `Y`. `modulus` lists coefficients low-to-high and may
    /// omit the leading 1.
    pub fn new(r: u64, k: u32, modulus: Option<&[u64]>) -> Result<FieldCtx> {
        if !is_prime(r) {
            return Err(Error::InvalidCharacteristic(r));
        }
        if k == 0 {
            return Err(Error::InvalidArgument(
                "extension degree must be >= 1".into(),
            ));
        }
        let q = r
            .checked_pow(k)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidArgument(format!("{r}^{k} exceeds 2^32")))?;
        let modulus = match modulus {
            Some(given) => Self::check_modulus(r, k, given)?,
            None if k == 1 => vec![0, 1],
            None => Self::smallest_irreducible(r, k)?,
        };
        let base_group = factorize(q - 1);
        let tower_group = if r == 2 {
            Vec::new()
        } else {
            merge_factorizations(factorize(q - 1), factorize(q + 1))
        };
        let mut inner = Inner {
            r,
            k,
            q,
            modulus,
            nonsquare: None,
            base: if k == 1 { Arith::Prime } else { Arith::Generic },
            tower: None,
            base_dense: None,
            tower_dense: None,
            base_group,
            tower_group,
            cyclotomic_memo: Mutex::new(HashMap::new()),
        };
        if k > 1 && q <= TABLE_LIMIT {
            inner.base = Arith::Table(inner.build_tables(Level::Base));
        }
        if r != 2 {
            let half = (q - 1) / 2;
            let c = (2..q)
                .find(|&c| inner.pow(Level::Base, c, half) != 1)
                .expect("odd fields have non-squares");
            inner.nonsquare = Some(c);
            inner.tower = Some(Arith::Generic);
            if q * q <= TABLE_LIMIT {
                inner.tower = Some(Arith::Table(inner.build_tables(Level::Tower)));
            }
            inner.tower_dense = inner.build_dense(Level::Tower);
        }
        inner.base_dense = inner.build_dense(Level::Base);
        Ok(FieldCtx {
            inner: Arc::new(inner),
        })
    }

    /// Convenience constructor for `F_q` given as an integer prime power.
    pub fn from_order(q: u64, modulus: Option<&[u64]>) -> Result<FieldCtx> {
        match crate::orders::prime_power_parts(q) {
            Some((r, k)) => FieldCtx::new(r, k, modulus),
            None => Err(Error::InvalidCharacteristic(q)),
        }
    }

    fn check_modulus(r: u64, k: u32, given: &[u64]) -> Result<Vec<u64>> {
        let k = k as usize;
        let mut m = given.to_vec();
        if m.len() == k {
            m.push(1);
        }
        if m.len() != k + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                k + 1,
                given.len()
            )));
        }
        if let Some(&bad) = m.iter().find(|&&c| c >= r) {
            return Err(Error::InvalidModulus(format!(
                "digit {bad} is not below {r}"
            )));
        }
        if m[k] != 1 {
            return Err(Error::InvalidModulus("modulus is not monic".into()));
        }
        if k > 1 && !Self::irreducible_over_prime(r, &m)? {
            return Err(Error::InvalidModulus("modulus is reducible".into()));
        }
        Ok(m)
    }

    fn irreducible_over_prime(r: u64, coeffs: &[u64]) -> Result<bool> {
        let prime = FieldCtx::new(r, 1, None)?;
        let poly = crate::poly::Polynomial::from_codes(&prime, Level::Base, coeffs.to_vec());
        Ok(crate::factor::is_irreducible(&poly))
    }

    fn smallest_irreducible(r: u64, k: u32) -> Result<Vec<u64>> {
        let lower = r.pow(k);
        for code in 0..lower {
            let mut m: Vec<u64> = (0..k).map(|i| code / r.pow(i) % r).collect();
            m.push(1);
            if Self::irreducible_over_prime(r, &m)? {
                return Ok(m);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Characteristic `r`.
    pub fn characteristic(&self) -> u64 {
        self.inner.r
    }

    /// Extension degree `k` over `F_r`.
    pub fn degree(&self) -> u32 {
        self.inner.k
    }

    /// Field size `q = r^k`.
    pub fn order(&self) -> u64 {
        self.inner.q
    }

    /// Modulus coefficients low-to-high, including the leading 1.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// The non-square `c` with `F_{q^2} = F_q[b]/(b^2 - c)`; `None` for even `q`.
    pub fn tower_nonsquare(&self) -> Option<FieldElement> {
        self.inner
            .nonsquare
            .map(|c| FieldElement::new_unchecked(Level::Base, c))
    }

    pub fn is_odd(&self) -> bool {
        self.inner.r != 2
    }

    /// Number of elements at `level`.
    pub fn size(&self, level: Level) -> u64 {
        match level {
            Level::Base => self.inner.q,
            Level::Tower => self.inner.q * self.inner.q,
        }
    }

    /// Order of the multiplicative group at `level`.
    pub fn group_order(&self, level: Level) -> u64 {
        self.size(level) - 1
    }

    fn check_level(&self, level: Level) -> Result<()> {
        if level == Level::Tower && self.inner.tower.is_none() {
            return Err(Error::TowerUnavailable);
        }
        Ok(())
    }

    pub(crate) fn ops(&self, level: Level) -> Ops<'_> {
        Ops {
            inner: &self.inner,
            level,
        }
    }

    pub(crate) fn cyclotomic_memo(&self) -> &Mutex<HashMap<u64, Vec<u64>>> {
        &self.inner.cyclotomic_memo
    }

    /// Element from its encoding.
    pub fn element(&self, level: Level, code: u64) -> Result<FieldElement> {
        self.check_level(level)?;
        if code >= self.size(level) {
            return Err(Error::InvalidArgument(format!(
                "element code {code} out of range"
            )));
        }
        Ok(FieldElement::new_unchecked(level, code))
    }

    /// The image of the integer `c` in the prime field.
    pub fn scalar(&self, c: i64) -> FieldElement {
        let r = self.inner.r as i64;
        FieldElement::new_unchecked(Level::Base, c.rem_euclid(r) as u64)
    }

    /// Element from base-`r` digits low-to-high (`k` digits at the base
    /// level, `2k` at the tower level: the `F_q` part then the `b` part).
    pub fn element_from_digits(&self, level: Level, digits: &[u64]) -> Result<FieldElement> {
        self.check_level(level)?;
        let k = self.inner.k as usize;
        let len = match level {
            Level::Base => k,
            Level::Tower => 2 * k,
        };
        if digits.len() > len {
            return Err(Error::InvalidArgument(format!(
                "expected at most {len} digits, got {}",
                digits.len()
            )));
        }
        let r = self.inner.r;
        let mut code = 0u64;
        for &d in digits.iter().rev() {
            if d >= r {
                return Err(Error::InvalidArgument(format!(
                    "digit {d} is not below {r}"
                )));
            }
            code = code * r + d;
        }
        Ok(FieldElement::new_unchecked(level, code))
    }

    /// Base-`r` digits low-to-high, padded to the level's dimension.
    pub fn digits(&self, x: FieldElement) -> Vec<u64> {
        self.inner.digits(x.level, x.code)
    }

    /// Maps an `F_q` element into `F_{q^2}`.
    pub fn embed(&self, x: FieldElement) -> Result<FieldElement> {
        self.check_level(Level::Tower)?;
        Ok(FieldElement::new_unchecked(Level::Tower, x.code))
    }

    /// Splits a tower element `u + v*b` into its `F_q` coordinates.
    pub fn tower_parts(&self, x: FieldElement) -> (FieldElement, FieldElement) {
        let q = self.inner.q;
        match x.level {
            Level::Base => (x, FieldElement::zero(Level::Base)),
            Level::Tower => (
                FieldElement::new_unchecked(Level::Base, x.code % q),
                FieldElement::new_unchecked(Level::Base, x.code / q),
            ),
        }
    }

    /// The tower element as an `F_q` element, if its `b` coordinate is zero.
    pub fn project(&self, x: FieldElement) -> Option<FieldElement> {
        match x.level {
            Level::Base => Some(x),
            Level::Tower if x.code < self.inner.q => {
                Some(FieldElement::new_unchecked(Level::Base, x.code))
            }
            Level::Tower => None,
        }
    }

    /// The tower generator `b` with `b^2 = c`.
    pub fn tower_generator(&self) -> Result<FieldElement> {
        self.check_level(Level::Tower)?;
        Ok(FieldElement::new_unchecked(Level::Tower, self.inner.q))
    }

    /// The generator `a = Y mod h` of `F_q` over `F_r` (equal to the prime
    /// field element 0 when `k = 1`).
    pub fn base_generator(&self) -> FieldElement {
        let code = if self.inner.k == 1 { 0 } else { self.inner.r };
        FieldElement::new_unchecked(Level::Base, code)
    }

    pub fn arith(&self, op: FieldOp, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        if x.level != y.level {
            return Err(Error::LevelMismatch);
        }
        self.check_level(x.level)?;
        let ops = self.ops(x.level);
        let code = match op {
            FieldOp::Add => ops.add(x.code, y.code),
            FieldOp::Sub => ops.sub(x.code, y.code),
            FieldOp::Mul => ops.mul(x.code, y.code),
            FieldOp::Div => {
                if y.code == 0 {
                    return Err(Error::DivisionByZero);
                }
                ops.mul(x.code, ops.inv(y.code))
            }
        };
        Ok(FieldElement::new_unchecked(x.level, code))
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.arith(FieldOp::Add, x, y)
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.arith(FieldOp::Sub, x, y)
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.arith(FieldOp::Mul, x, y)
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.arith(FieldOp::Div, x, y)
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        FieldElement::new_unchecked(x.level, self.ops(x.level).neg(x.code))
    }

    /// `x^e` with `0^0 = 1`.
    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        FieldElement::new_unchecked(x.level, self.ops(x.level).pow(x.code, e))
    }

    /// Multiplicative order of `x`, by stripping prime factors from the
    /// group order.
    pub fn element_order(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroHasNoOrder);
        }
        self.check_level(x.level)?;
        Ok(self.inner.order_of(x.level, x.code))
    }

    /// First element, scanning candidates in encoding order, whose
    /// `(group order / d)`-th power has order exactly `d`.
    pub fn find_root_of_unity(&self, level: Level, d: u64) -> Result<FieldElement> {
        self.check_level(level)?;
        let n = self.group_order(level);
        if d == 0 || !n.is_multiple_of(d) {
            return Err(Error::NoSuchRoot { d, group_order: n });
        }
        let ops = self.ops(level);
        for g in 1..self.size(level) {
            let y = ops.pow(g, n / d);
            if self.inner.order_of(level, y) == d {
                return Ok(FieldElement::new_unchecked(level, y));
            }
        }
        unreachable!("the multiplicative group is cyclic")
    }

    /// Text form: `2*a+1` at the base level, with `*b` terms at the tower level.
    pub fn format(&self, x: FieldElement) -> String {
        match x.level {
            Level::Base => self.format_base(x.code),
            Level::Tower => {
                let q = self.inner.q;
                let (u, v) = (x.code % q, x.code / q);
                if v == 0 {
                    return self.format_base(u);
                }
                let v_text = self.format_base(v);
                let v_part = if v == 1 {
                    "b".to_string()
                } else if self.term_count(v) > 1 {
                    format!("({v_text})*b")
                } else {
                    format!("{v_text}*b")
                };
                if u == 0 {
                    v_part
                } else {
                    format!("{}+{v_part}", self.format_base(u))
                }
            }
        }
    }

    /// Number of nonzero digits (the element's own "weight" in the
    /// `Y`-basis); used to decide on parentheses.
    pub(crate) fn term_count(&self, code: u64) -> usize {
        let mut c = code;
        let mut n = 0;
        while c > 0 {
            if !c.is_multiple_of(self.inner.r) {
                n += 1;
            }
            c /= self.inner.r;
        }
        n
    }

    pub(crate) fn element_terms(&self, x: FieldElement) -> usize {
        match x.level {
            Level::Base => self.term_count(x.code),
            Level::Tower => {
                let q = self.inner.q;
                self.term_count(x.code % q) + self.term_count(x.code / q)
            }
        }
    }

    fn format_base(&self, code: u64) -> String {
        if code == 0 {
            return "0".into();
        }
        let digits = self.inner.digits(Level::Base, code);
        let mut terms = Vec::new();
        for (i, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, _) => format!("{c}*a"),
                (_, 1) => format!("a^{i}"),
                (_, _) => format!("{c}*a^{i}"),
            };
            terms.push(term);
        }
        terms.join("+")
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.q)
    }
}

impl Inner {
    fn digits(&self, level: Level, code: u64) -> Vec<u64> {
        let k = self.k as usize;
        let len = match level {
            Level::Base => k,
            Level::Tower => 2 * k,
        };
        let mut out = Vec::with_capacity(len);
        let mut c = code;
        for _ in 0..len {
            out.push(c % self.r);
            c /= self.r;
        }
        out
    }

    fn encode(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.r + d)
    }

    fn arith(&self, level: Level) -> &Arith {
        match level {
            Level::Base => &self.base,
            Level::Tower => self
                .tower
                .as_ref()
                .expect("tower level requested for even q"),
        }
    }

    fn add(&self, level: Level, a: u64, b: u64) -> u64 {
        match self.arith(level) {
            Arith::Prime => {
                let s = a + b;
                if s >= self.r {
                    s - self.r
                } else {
                    s
                }
            }
            Arith::Table(t) => t.add(a, b),
            Arith::Generic => match level {
                Level::Base => {
                    let (da, db) = (self.digits(level, a), self.digits(level, b));
                    let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.r).collect();
                    self.encode(&sum)
                }
                Level::Tower => {
                    let q = self.q;
                    let u = self.add(Level::Base, a % q, b % q);
                    let v = self.add(Level::Base, a / q, b / q);
                    u + q * v
                }
            },
        }
    }

    fn neg(&self, level: Level, a: u64) -> u64 {
        match self.arith(level) {
            Arith::Prime => {
                if a == 0 {
                    0
                } else {
                    self.r - a
                }
            }
            Arith::Table(t) => t.neg(a),
            Arith::Generic => match level {
                Level::Base => {
                    let d: Vec<u64> = self
                        .digits(level, a)
                        .iter()
                        .map(|&x| (self.r - x) % self.r)
                        .collect();
                    self.encode(&d)
                }
                Level::Tower => {
                    let q = self.q;
                    self.neg(Level::Base, a % q) + q * self.neg(Level::Base, a / q)
                }
            },
        }
    }

    fn mul(&self, level: Level, a: u64, b: u64) -> u64 {
        match self.arith(level) {
            Arith::Prime => a * b % self.r,
            Arith::Table(t) => t.mul(a, b),
            Arith::Generic => match level {
                Level::Base => self.generic_base_mul(a, b),
                Level::Tower => {
                    let q = self.q;
                    let (u1, v1, u2, v2) = (a % q, a / q, b % q, b / q);
                    let c = self.nonsquare.expect("tower exists only for odd q");
                    let vv = self.mul(Level::Base, v1, v2);
                    let u = self.add(
                        Level::Base,
                        self.mul(Level::Base, u1, u2),
                        self.mul(Level::Base, c, vv),
                    );
                    let v = self.add(
                        Level::Base,
                        self.mul(Level::Base, u1, v2),
                        self.mul(Level::Base, u2, v1),
                    );
                    u + q * v
                }
            },
        }
    }

    fn generic_base_mul(&self, a: u64, b: u64) -> u64 {
        let r = self.r;
        let k = self.k as usize;
        let (da, db) = (self.digits(Level::Base, a), self.digits(Level::Base, b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % r;
            }
        }
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &m) in self.modulus[..k].iter().enumerate() {
                prod[i - k + j] = (prod[i - k + j] + (r - c) * m) % r;
            }
        }
        self.encode(&prod[..k])
    }

    fn pow(&self, level: Level, a: u64, mut e: u64) -> u64 {
        if let Arith::Table(t) = self.arith(level) {
            return t.pow(a, e);
        }
        let mut acc = 1u64;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(level, acc, base);
            }
            base = self.mul(level, base, base);
            e >>= 1;
        }
        acc
    }

    fn group_order(&self, level: Level) -> u64 {
        match level {
            Level::Base => self.q - 1,
            Level::Tower => self.q * self.q - 1,
        }
    }

    fn inv(&self, level: Level, a: u64) -> u64 {
        match self.arith(level) {
            Arith::Table(t) => t.inv(a),
            _ => self.pow(level, a, self.group_order(level) - 1),
        }
    }

    fn order_of(&self, level: Level, a: u64) -> u64 {
        let n = self.group_order(level);
        if let Arith::Table(t) = self.arith(level) {
            return n / gcd(n, t.log[a as usize] as u64);
        }
        let factors = match level {
            Level::Base => &self.base_group,
            Level::Tower => &self.tower_group,
        };
        let mut order = n;
        for &(p, _) in factors {
            while order.is_multiple_of(p) && self.pow(level, a, order / p) == 1 {
                order /= p;
            }
        }
        order
    }

    fn build_dense(&self, level: Level) -> Option<Dense> {
        let size = self.group_order(level) + 1;
        if size > DENSE_LIMIT {
            return None;
        }
        let pairs = || (0..size).flat_map(move |a| (0..size).map(move |b| (a, b)));
        Some(Dense {
            size: size as usize,
            add: pairs().map(|(a, b)| self.add(level, a, b) as u8).collect(),
            mul: pairs().map(|(a, b)| self.mul(level, a, b) as u8).collect(),
        })
    }

    fn build_tables(&self, level: Level) -> Tables {
        let n = self.group_order(level);
        let size = n + 1;
        let factors = match level {
            Level::Base => &self.base_group,
            Level::Tower => &self.tower_group,
        };
        let generator = (1..size)
            .find(|&g| factors.iter().all(|&(p, _)| self.pow(level, g, n / p) != 1))
            .expect("the multiplicative group is cyclic");
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![NO_LOG; size as usize];
        let mut x = 1u64;
        for i in 0..n {
            exp[i as usize] = x as u32;
            log[x as usize] = i as u32;
            x = self.mul(level, x, generator);
        }
        let zech = (0..n)
            .map(|i| {
                let s = self.add(level, exp[i as usize] as u64, 1);
                log[s as usize]
            })
            .collect();
        let neg_one_log = (self.r != 2).then_some(n / 2);
        Tables {
            group_order: n,
            exp,
            log,
            zech,
            neg_one_log,
        }
    }
}

/// Unchecked arithmetic on element codes at a fixed level.
#[derive(Clone, Copy)]
pub(crate) struct Ops<'a> {
    inner: &'a Inner,
    level: Level,
}

impl Ops<'_> {
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        self.inner.add(self.level, a, b)
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        self.inner.neg(self.level, a)
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.inner.mul(self.level, a, b)
    }

    /// Inverse of a nonzero code.
    pub fn inv(self, a: u64) -> u64 {
        self.inner.inv(self.level, a)
    }

    pub fn pow(self, a: u64, e: u64) -> u64 {
        self.inner.pow(self.level, a, e)
    }

    /// `dst[j] += c * src[j]` for every `j`.
    pub fn axpy(self, dst: &mut [u64], src: &[u64], c: u64) {
        if c == 0 {
            return;
        }
        let dense = match self.level {
            Level::Base => &self.inner.base_dense,
            Level::Tower => &self.inner.tower_dense,
        };
        if let Some(t) = dense {
            let row = &t.mul[c as usize * t.size..][..t.size];
            for (d, &s) in dst.iter_mut().zip(src) {
                *d = t.add[*d as usize * t.size + row[s as usize] as usize] as u64;
            }
            return;
        }
        match self.inner.arith(self.level) {
            Arith::Prime => {
                let r = self.inner.r;
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = (*d + c * s) % r;
                }
            }
            Arith::Table(t) => {
                let lc = t.log[c as usize] as u64;
                for (d, &s) in dst.iter_mut().zip(src) {
                    if s != 0 {
                        let prod = t.exp[t.wrap(lc + t.log[s as usize] as u64) as usize] as u64;
                        *d = t.add(*d, prod);
                    }
                }
            }
            Arith::Generic => {
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = self.add(*d, self.mul(c, s));
                }
            }
        }
    }
}
