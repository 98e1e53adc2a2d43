//! Cyclotomic polynomials over `F_q`.
//!
//! `Phi_d` is obtained by dividing `X^d - 1` by `Phi_e` for every proper
//! divisor `e` of `d`. Results are cached per field; the cache sits behind a
//! mutex and fills are idempotent, so a [`FieldCtx`] may be shared across
//! threads while computing cyclotomics.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Level};
use crate::orders::{divisors, is_prime};
use crate::poly::Polynomial;

fn check_index(ctx: &FieldCtx, d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "cyclotomic index must be positive".into(),
        ));
    }
    let r = ctx.characteristic();
    if d.is_multiple_of(r) {
        return Err(Error::CharacteristicDividesIndex { r, d });
    }
    Ok(())
}

/// The `d`-th cyclotomic polynomial over `F_q`, of degree `phi(d)`.
pub fn cyclotomic_poly(ctx: &FieldCtx, d: u64) -> Result<Polynomial> {
    check_index(ctx, d)?;
    if let Some(codes) = ctx.cyclotomic_memo().lock().unwrap().get(&d) {
        return Ok(Polynomial::from_codes(ctx, Level::Base, codes.clone()));
    }
    let mut phi = Polynomial::x_pow_minus_one(ctx, d as usize);
    for e in divisors(d) {
        if e == d {
            break;
        }
        phi = phi.exact_div(&cyclotomic_poly(ctx, e)?)?;
    }
    ctx.cyclotomic_memo()
        .lock()
        .unwrap()
        .insert(d, phi.codes().to_vec());
    Ok(phi)
}

/// Compares `Phi_{m p^e}` with `Phi_{m p}(X^{p^{e-1}})`, both computed
/// independently. The identity holds for every prime `p`; the function
/// exists to exhibit it.
pub fn cyclotomic_inflation_check(ctx: &FieldCtx, m: u64, p: u64, e: u32) -> Result<bool> {
    if e == 0 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "inflation check needs a prime p and e >= 1 (got p={p}, e={e})"
        )));
    }
    let pe1 = p.pow(e - 1);
    let big = cyclotomic_poly(ctx, m * p * pe1)?;
    let small = cyclotomic_poly(ctx, m * p)?;
    Ok(big == small.inflate(pe1 as usize))
}
