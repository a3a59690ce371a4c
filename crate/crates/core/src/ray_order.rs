//! Rational rays of `N^q_+` and the recursive total order on their
//! primitive representatives.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::coideal::{CoIdeal, MultiIndex};
use crate::error::{Error, Result};

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Nonnegative generator of the subgroup spanned by the entries; 0 iff all
/// entries vanish.
pub fn gcd_vec(beta: &MultiIndex) -> u32 {
    beta.entries().iter().fold(0, |g, &a| gcd(g, a))
}

/// `β / gcd(β)`.
pub fn primitive(beta: &MultiIndex) -> Result<MultiIndex> {
    let g = gcd_vec(beta);
    if g == 0 {
        return Err(Error::ZeroVector);
    }
    Ok(MultiIndex::new(beta.entries().iter().map(|a| a / g).collect()))
}

pub fn is_primitive(beta: &MultiIndex) -> bool {
    gcd_vec(beta) == 1
}

/// `(0,0)` when `β_1 = β_2 = 0`, else the primitive form of `(β_1, β_2)`.
pub fn g_map(beta: &MultiIndex) -> Result<(u32, u32)> {
    let e = beta.entries();
    if e.len() < 2 {
        return Err(Error::TooFewVariables { needed: 2, found: e.len() });
    }
    let g = gcd(e[0], e[1]);
    if g == 0 {
        return Ok((0, 0));
    }
    Ok((e[0] / g, e[1] / g))
}

fn compare2(b: (u32, u32), c: (u32, u32)) -> Ordering {
    // b < c iff c2 b1 < c1 b2
    let lhs = c.1 as u64 * b.0 as u64;
    let rhs = c.0 as u64 * b.1 as u64;
    lhs.cmp(&rhs)
}

fn compare_slice(b: &[u32], c: &[u32]) -> Ordering {
    match b.len() {
        1 => b.cmp(c),
        2 => compare2((b[0], b[1]), (c[0], c[1])),
        _ => {
            let gb = gcd(b[0], b[1]);
            let gc = gcd(c[0], c[1]);
            match (gb == 0, gc == 0) {
                (true, false) => Ordering::Less,
                (false, true) => Ordering::Greater,
                (false, false) => {
                    let ord = compare2((b[0] / gb, b[1] / gb), (c[0] / gc, c[1] / gc));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    recurse(gb, b, gc, c)
                }
                (true, true) => recurse(gb, b, gc, c),
            }
        }
    }
}

fn recurse(gb: u32, b: &[u32], gc: u32, c: &[u32]) -> Ordering {
    let mut rb = Vec::with_capacity(b.len() - 1);
    rb.push(gb);
    rb.extend_from_slice(&b[2..]);
    let mut rc = Vec::with_capacity(c.len() - 1);
    rc.push(gc);
    rc.extend_from_slice(&c[2..]);
    compare_slice(&rb, &rc)
}

/// Compares two primitive vectors under the recursive ray order. Classes
/// are compared through their primitive forms, so non-primitive inputs are
/// accepted and compare as their rays.
pub fn ray_compare(beta: &MultiIndex, gamma: &MultiIndex) -> Result<Ordering> {
    if beta.q() != gamma.q() {
        return Err(Error::LengthMismatch(beta.q(), gamma.q()));
    }
    let b = primitive(beta)?;
    let c = primitive(gamma)?;
    if b.q() == 1 {
        return Ok(Ordering::Equal);
    }
    Ok(compare_slice(b.entries(), c.entries()))
}

/// The primitive members of `Δ \ {0}`, ascending.
pub fn sorted_rays(delta: &CoIdeal) -> Result<Vec<MultiIndex>> {
    if delta.is_trivial() {
        return Err(Error::TrivialCoIdeal);
    }
    let mut rays: Vec<MultiIndex> = delta
        .members()
        .iter()
        .filter(|m| !m.is_zero())
        .map(|m| primitive(m).expect("nonzero"))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    rays.sort_by(|a, b| ray_compare(a, b).expect("same q"));
    Ok(rays)
}

/// Direct enumeration for two-variable boxes: walks the primitive vectors
/// of `box((b1, b2))` in slope order without materializing the co-ideal.
pub fn sorted_rays_box2(b1: u32, b2: u32) -> Vec<MultiIndex> {
    let mut rays: Vec<(u32, u32)> = Vec::new();
    if b2 > 0 {
        rays.push((0, 1));
    }
    for x in 1..=b1 {
        for y in 1..=b2 {
            if gcd(x, y) == 1 {
                rays.push((x, y));
            }
        }
    }
    if b1 > 0 {
        rays.push((1, 0));
    }
    // Ascending ray order is descending slope y/x.
    rays.sort_by(|&a, &b| compare2(a, b));
    rays.into_iter().map(|(x, y)| MultiIndex::new(vec![x, y])).collect()
}

/// The multiples of a ray inside a co-ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayData {
    pub beta: MultiIndex,
    /// `max{n : nβ ∈ Δ}`.
    pub multiplicity: u32,
    /// `β, 2β, ..., mβ`.
    pub orbit: Vec<MultiIndex>,
}

pub fn ray_data(delta: &CoIdeal, beta: &MultiIndex) -> Result<RayData> {
    if beta.q() != delta.q() {
        return Err(Error::LengthMismatch(delta.q(), beta.q()));
    }
    if !delta.contains(beta) || beta.is_zero() {
        return Err(Error::NotMember(beta.clone()));
    }
    let mut orbit = Vec::new();
    let mut n = 1;
    loop {
        let m = beta.scaled(n);
        if !delta.contains(&m) {
            break;
        }
        orbit.push(m);
        n += 1;
    }
    Ok(RayData { beta: beta.clone(), multiplicity: orbit.len() as u32, orbit })
}

/// `γ ∈ T_β`: nonzero with class at or above `β`.
pub fn in_t(beta: &MultiIndex, gamma: &MultiIndex) -> bool {
    !gamma.is_zero() && ray_compare(gamma, beta).map(|o| o != Ordering::Less).unwrap_or(false)
}

/// `γ ∈ S_β`: nonzero with class strictly below `β`.
pub fn in_s(beta: &MultiIndex, gamma: &MultiIndex) -> bool {
    !gamma.is_zero() && ray_compare(gamma, beta).map(|o| o == Ordering::Less).unwrap_or(false)
}

/// Members of `Δ` in `S_β`.
pub fn s_set(delta: &CoIdeal, beta: &MultiIndex) -> Vec<MultiIndex> {
    delta.members().iter().filter(|g| in_s(beta, g)).cloned().collect()
}
