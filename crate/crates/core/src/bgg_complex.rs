//! Weight sequence of the projective BGG complex on a hyperbolic `n`-manifold.
//!
//! Labels are `sl(n+1)` weights in the fundamental basis with the first node
//! crossed. The first entry of a slot label is a density weight; the remaining
//! `n-1` entries label an irreducible of the Levi factor `sl(n)` and determine
//! the rank of the bundle.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_core::{weyl_dim_a, Family, RootSystem};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BggComplexDescription {
    pub n: usize,
    pub input_label: Vec<i64>,
    pub slots: Vec<Vec<i64>>,
    pub dims: Vec<u64>,
    pub names: Vec<Option<String>>,
}

fn check_input(n: usize, a: &[i64]) -> Result<()> {
    if n < 2 {
        return Err(Error::UnsupportedRootSystem { family: 'A', rank: n });
    }
    if a.len() != n {
        return Err(Error::MalformedWeight(format!("expected {n} labels, got {}", a.len())));
    }
    if let Some((index, v)) = a.iter().enumerate().find(|(_, v)| **v < 0) {
        return Err(Error::NotDominant { index, value: v.to_string() });
    }
    Ok(())
}

/// Slot labels in the tabulated form. Slot `k` for `1 <= k <= n-1` is
/// `(a1 - a2 - ... - ak - (k+1), a1, ..., a_{k-1}, a_k + a_{k+1} + 1, a_{k+2}, ..., a_n)`
/// and slot `n` is `(-a1 - ... - an - (n+1), a1, ..., a_{n-1})`.
pub fn bgg_slots(n: usize, a: &[i64]) -> Result<Vec<Vec<i64>>> {
    check_input(n, a)?;
    let mut slots = vec![a.to_vec()];
    for k in 1..n {
        let mut s = Vec::with_capacity(n);
        s.push(a[0] - a[1..k].iter().sum::<i64>() - (k as i64 + 1));
        s.extend_from_slice(&a[..k - 1]);
        s.push(a[k - 1] + a[k] + 1);
        s.extend_from_slice(&a[k + 1..]);
        slots.push(s);
    }
    let mut last = vec![-a.iter().sum::<i64>() - (n as i64 + 1)];
    last.extend_from_slice(&a[..n - 1]);
    slots.push(last);
    Ok(slots)
}

/// Full description: slot labels, ranks and recognised bundle names.
pub fn bgg_weights(n: usize, a: &[i64]) -> Result<BggComplexDescription> {
    let slots = bgg_slots(n, a)?;
    let dims = slots.iter().map(|s| slot_dim(s, n)).collect::<Result<Vec<_>>>()?;
    let names = slots.iter().enumerate().map(|(k, s)| bundle_name(s, k, n)).collect();
    Ok(BggComplexDescription { n, input_label: a.to_vec(), slots, dims, names })
}

/// Rank of the bundle labelled by `slot`: the `sl(n)` Weyl dimension of
/// entries `2..=n`. The leading density entry contributes a factor 1.
pub fn slot_dim(slot: &[i64], n: usize) -> Result<u64> {
    if slot.len() != n {
        return Err(Error::Uncalibrated { label: slot.to_vec(), reason: format!("expected {n} entries") });
    }
    let levi = &slot[1..];
    if levi.iter().any(|&b| b < 0) {
        return Err(Error::Uncalibrated { label: slot.to_vec(), reason: "Levi part is not dominant".into() });
    }
    weyl_dim_a(levi)?
        .to_u64()
        .ok_or_else(|| Error::SizeGuard { what: "slot dimension exceeds u64".into(), limit: u64::MAX as usize })
}

/// Alternating sum of ranks vanishes.
pub fn euler_check(c: &BggComplexDescription) -> bool {
    euler_sum(&c.dims) == 0
}

pub fn euler_sum(dims: &[u64]) -> i128 {
    dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i128 } else { -(d as i128) }).sum()
}

fn unit(levi: &[i64], p: usize) -> bool {
    levi.iter().enumerate().all(|(i, &b)| b == i64::from(i == p))
}

/// Names for the few shapes with a standard tensor description, with
/// `T*M` carrying the first Levi label.
fn bundle_name(slot: &[i64], k: usize, n: usize) -> Option<String> {
    let levi = &slot[1..];
    let rest_zero = |from: usize| levi.iter().skip(from).all(|&b| b == 0);
    if levi.iter().all(|&b| b == 0) {
        return Some(if k == n { format!("Λ^{n}T*M") } else { "ℝ".into() });
    }
    if unit(levi, 0) {
        return Some("T*M".into());
    }
    if let Some(p) = (1..levi.len()).find(|&p| unit(levi, p)) {
        return Some(format!("Λ^{}T*M", p + 1));
    }
    let q = levi[0];
    if q >= 2 && rest_zero(1) {
        return Some(format!("S^{q}T*M"));
    }
    if levi.len() >= 2 && q >= 1 && levi[1] == 1 && rest_zero(2) {
        return Some(if q == 1 { "Λ²T*M⊙T*M".into() } else { format!("Λ²T*M⊙S^{q}T*M") });
    }
    let m = levi.len();
    if m >= 3 && q == 2 && levi[m - 1] == 1 && levi[1..m - 1].iter().all(|&b| b == 0) {
        return Some("(S²T*M⊗TM)₀".into());
    }
    None
}

/// Independent computation of the slots through the affine Weyl action
/// `w.λ = w(λ+ρ) - ρ` with `w_k = s_1 s_2 ... s_k`. Agrees with
/// [`bgg_slots`] in every Levi entry; the density entry of slots
/// `1..n-1` comes out as `-(a1 + ... + ak) - (k+1)`.
pub fn affine_weyl_slots(n: usize, a: &[i64]) -> Result<Vec<Vec<i64>>> {
    check_input(n, a)?;
    let cartan = RootSystem::new(Family::A, n)?.cartan_matrix();
    let reflect = |v: &mut Vec<i64>, i: usize| {
        let c = v[i];
        for (x, aij) in v.iter_mut().zip(&cartan[i]) {
            *x -= c * aij;
        }
    };
    let shifted: Vec<i64> = a.iter().map(|x| x + 1).collect();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut v = shifted.clone();
        for i in (0..k).rev() {
            reflect(&mut v, i);
        }
        out.push(v.into_iter().map(|x| x - 1).collect());
    }
    Ok(out)
}
