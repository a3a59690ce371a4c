//! Multi-indices in `N^q` and finite co-ideals (downward-closed sets).

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the number of members of a constructed co-ideal.
pub const DEFAULT_MEMBER_CAP: usize = 1_000_000;

/// The member cap in effect: `HSFORGE_MEMBER_CAP` if set and valid,
/// otherwise [`DEFAULT_MEMBER_CAP`].
pub fn member_cap() -> usize {
    std::env::var("HSFORGE_MEMBER_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MEMBER_CAP)
}

/// An element of `N^q`. Ordered graded-lexicographically: total degree
/// first, then entry by entry.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(q: usize) -> Self {
        MultiIndex(vec![0; q])
    }

    /// The `i`-th unit vector of `N^q`.
    pub fn unit(q: usize, i: usize) -> Self {
        let mut v = vec![0; q];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn q(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &MultiIndex) -> Result<bool> {
        if self.q() != other.q() {
            return Err(Error::LengthMismatch(self.q(), other.q()));
        }
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// `self - other` when `other <= self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.q() != other.q() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn scaled(&self, n: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * n).collect())
    }

    /// Concatenation, for product co-ideals.
    pub fn concat(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    /// The `"1,2"` form used as a JSON object key.
    pub fn key(&self) -> String {
        self.0.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_key(s: &str) -> Result<MultiIndex> {
        s.split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(MultiIndex)
            .map_err(|_| Error::Parse(format!("bad multi-index key {s:?}")))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        assert_eq!(self.q(), rhs.q(), "adding multi-indices of different lengths");
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

/// A finite, non-empty co-ideal of `N^q`, members kept in graded-lex order.
#[derive(Clone)]
pub struct CoIdeal {
    q: usize,
    members: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl PartialEq for CoIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.members == other.members
    }
}

impl Eq for CoIdeal {}

impl fmt::Debug for CoIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoIdeal(q={}, {:?})", self.q, self.members)
    }
}

/// True iff `set` is a downward-closed subset of `N^q` containing 0.
pub fn is_coideal(q: usize, set: &[MultiIndex]) -> bool {
    first_violation(q, set).is_none()
}

fn first_violation(q: usize, set: &[MultiIndex]) -> Option<(MultiIndex, MultiIndex)> {
    let members: BTreeSet<&MultiIndex> = set.iter().collect();
    for a in set {
        if a.q() != q {
            return Some((a.clone(), MultiIndex::zero(q)));
        }
        // Closure under the immediate predecessors implies full downward
        // closure by induction on the degree.
        for i in 0..q {
            if a.0[i] > 0 {
                let mut b = a.clone();
                b.0[i] -= 1;
                if !members.contains(&b) {
                    return Some((a.clone(), b));
                }
            }
        }
    }
    None
}

impl CoIdeal {
    /// Validates downward closure and sorts the members.
    pub fn from_members(q: usize, members: Vec<MultiIndex>) -> Result<Self> {
        Self::from_members_capped(q, members, member_cap())
    }

    pub fn from_members_capped(q: usize, members: Vec<MultiIndex>, cap: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::LengthMismatch(0, 1));
        }
        if members.len() > cap {
            return Err(Error::MemberCap { cap });
        }
        let set: BTreeSet<MultiIndex> = members.into_iter().collect();
        let members: Vec<MultiIndex> = set.into_iter().collect();
        if members.is_empty() {
            return Err(Error::NotCoIdeal(MultiIndex::zero(q), MultiIndex::zero(q)));
        }
        if let Some((a, b)) = first_violation(q, &members) {
            if a.q() != q {
                return Err(Error::LengthMismatch(q, a.q()));
            }
            return Err(Error::NotCoIdeal(a, b));
        }
        Ok(Self::from_sorted(q, members))
    }

    fn from_sorted(q: usize, members: Vec<MultiIndex>) -> Self {
        let position = members.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        CoIdeal { q, members, position }
    }

    /// `{γ : γ <= b}`.
    pub fn boxed(b: &MultiIndex) -> Result<Self> {
        Self::boxed_capped(b, member_cap())
    }

    pub fn boxed_capped(b: &MultiIndex, cap: usize) -> Result<Self> {
        let q = b.q();
        if q == 0 {
            return Err(Error::LengthMismatch(0, 1));
        }
        let count: u128 = b.0.iter().map(|&e| e as u128 + 1).product();
        if count > cap as u128 {
            return Err(Error::MemberCap { cap });
        }
        let mut members = Vec::with_capacity(count as usize);
        let mut cur = vec![0u32; q];
        loop {
            members.push(MultiIndex(cur.clone()));
            let mut i = 0;
            loop {
                if i == q {
                    members.sort();
                    return Ok(Self::from_sorted(q, members));
                }
                if cur[i] < b.0[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// `{γ in N^q : |γ| <= r}`.
    pub fn total_degree(q: usize, r: u32) -> Result<Self> {
        Self::total_degree_capped(q, r, member_cap())
    }

    pub fn total_degree_capped(q: usize, r: u32, cap: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::LengthMismatch(0, 1));
        }
        // C(r + q, q) members.
        let mut count: u128 = 1;
        for i in 1..=q as u128 {
            count = count * (r as u128 + i) / i;
            if count > cap as u128 * q as u128 + 1 {
                return Err(Error::MemberCap { cap });
            }
        }
        if count > cap as u128 {
            return Err(Error::MemberCap { cap });
        }
        let mut members = Vec::with_capacity(count as usize);
        fn rec(prefix: &mut Vec<u32>, q: usize, budget: u32, out: &mut Vec<MultiIndex>) {
            if prefix.len() == q {
                out.push(MultiIndex(prefix.clone()));
                return;
            }
            for a in 0..=budget {
                prefix.push(a);
                rec(prefix, q, budget - a, out);
                prefix.pop();
            }
        }
        rec(&mut Vec::with_capacity(q), q, r, &mut members);
        members.sort();
        Ok(Self::from_sorted(q, members))
    }

    /// The one-variable co-ideal `{0, ..., m}`.
    pub fn uni(m: u32) -> Self {
        Self::from_sorted(1, (0..=m).map(|n| MultiIndex(vec![n])).collect())
    }

    pub fn intersect(&self, other: &CoIdeal) -> Result<CoIdeal> {
        if self.q != other.q {
            return Err(Error::LengthMismatch(self.q, other.q));
        }
        let members = self.members.iter().filter(|m| other.contains(m)).cloned().collect();
        Ok(Self::from_sorted(self.q, members))
    }

    /// `{(α, β) : α in self, β in other}` in `N^{p+q}`.
    pub fn product(&self, other: &CoIdeal) -> Result<CoIdeal> {
        let count = self.len() as u128 * other.len() as u128;
        let cap = member_cap();
        if count > cap as u128 {
            return Err(Error::MemberCap { cap });
        }
        let mut members: Vec<MultiIndex> = self
            .members
            .iter()
            .flat_map(|a| other.members.iter().map(move |b| a.concat(b)))
            .collect();
        members.sort();
        Ok(Self::from_sorted(self.q + other.q, members))
    }

    /// `Δ ∩ {|α| <= r}`.
    pub fn truncate_degree(&self, r: u64) -> CoIdeal {
        let members = self.members.iter().filter(|m| m.degree() <= r).cloned().collect();
        Self::from_sorted(self.q, members)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn members(&self) -> &[MultiIndex] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True when the only member is 0.
    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains(&self, a: &MultiIndex) -> bool {
        self.position.contains_key(a)
    }

    /// Position in the graded-lex member list.
    pub fn index_of(&self, a: &MultiIndex) -> Option<usize> {
        self.position.get(a).copied()
    }

    pub fn is_subset_of(&self, other: &CoIdeal) -> bool {
        self.q == other.q && self.members.iter().all(|m| other.contains(m))
    }

    /// Members `β` with `β <= α`.
    pub fn below<'a>(&'a self, alpha: &'a MultiIndex) -> impl Iterator<Item = &'a MultiIndex> + 'a {
        self.members.iter().take_while(move |b| b.degree() <= alpha.degree()).filter(move |b| {
            b.0.iter().zip(&alpha.0).all(|(x, y)| x <= y)
        })
    }

    /// Componentwise maximum over members when the co-ideal is a box.
    pub fn box_bound(&self) -> Option<MultiIndex> {
        let top = self.members.last()?;
        let count: usize = top.0.iter().map(|&e| e as usize + 1).product();
        (count == self.len()).then(|| top.clone())
    }

    pub fn to_doc(&self) -> CoIdealDoc {
        if let Some(b) = self.box_bound() {
            return CoIdealDoc::Box { q: self.q, r#box: b.0 };
        }
        let max_deg = self.members.last().map(|m| m.degree()).unwrap_or(0);
        if let Ok(td) = CoIdeal::total_degree(self.q, max_deg as u32) {
            if &td == self {
                return CoIdealDoc::TotalDegree { q: self.q, total_degree: max_deg as u32 };
            }
        }
        CoIdealDoc::Members { q: self.q, members: self.members.iter().map(|m| m.0.clone()).collect() }
    }
}

/// JSON form: `{"q":2,"box":[2,2]}`, `{"q":2,"total_degree":4}` or
/// `{"q":2,"members":[[0,0],[1,0],...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum CoIdealDoc {
    Box {
        q: usize,
        r#box: Vec<u32>,
    },
    TotalDegree {
        q: usize,
        total_degree: u32,
    },
    Members {
        q: usize,
        members: Vec<Vec<u32>>,
    },
}

impl CoIdealDoc {
    pub fn to_coideal(&self) -> Result<CoIdeal> {
        match self {
            CoIdealDoc::Box { q, r#box } => {
                if r#box.len() != *q {
                    return Err(Error::LengthMismatch(*q, r#box.len()));
                }
                CoIdeal::boxed(&MultiIndex(r#box.clone()))
            }
            CoIdealDoc::TotalDegree { q, total_degree } => CoIdeal::total_degree(*q, *total_degree),
            CoIdealDoc::Members { q, members } => {
                CoIdeal::from_members(*q, members.iter().cloned().map(MultiIndex).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    #[test]
    fn partial_order_examples() {
        assert!(mi(&[0, 0]).leq(&mi(&[3, 1])).unwrap());
        assert!(!mi(&[1, 2]).leq(&mi(&[2, 1])).unwrap());
        assert!(mi(&[1, 1]).leq(&mi(&[2, 2])).unwrap());
        assert!(mi(&[1]).leq(&mi(&[1, 1])).is_err());
    }

    #[test]
    fn constructors() {
        assert_eq!(CoIdeal::boxed(&mi(&[2, 2])).unwrap().len(), 9);
        for m in 0..5 {
            assert_eq!(CoIdeal::boxed(&mi(&[m, m])).unwrap().len(), ((m + 1) * (m + 1)) as usize);
        }
        let td = CoIdeal::total_degree(2, 2).unwrap();
        let expected: Vec<MultiIndex> =
            [[0, 0], [0, 1], [1, 0], [0, 2], [1, 1], [2, 0]].iter().map(|v| mi(v)).collect();
        assert_eq!(td.members(), &expected[..]);
        let u = CoIdeal::uni(4);
        assert_eq!(u.members().iter().map(|m| m.0[0]).collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn membership_predicates() {
        assert!(!is_coideal(2, &[mi(&[0, 0]), mi(&[1, 1])]));
        assert!(is_coideal(2, &[mi(&[0, 0]), mi(&[1, 0])]));
        assert!(matches!(
            CoIdeal::from_members(2, vec![mi(&[0, 0]), mi(&[1, 1])]),
            Err(Error::NotCoIdeal(..))
        ));
        let b = CoIdeal::boxed(&mi(&[2, 2])).unwrap();
        let t = CoIdeal::total_degree(2, 2).unwrap();
        assert_eq!(b.intersect(&t).unwrap().len(), 6);
    }

    #[test]
    fn member_cap_is_enforced() {
        assert!(matches!(
            CoIdeal::boxed_capped(&mi(&[9, 9]), 50),
            Err(Error::MemberCap { cap: 50 })
        ));
        assert!(matches!(
            CoIdeal::total_degree_capped(3, 40, 100),
            Err(Error::MemberCap { .. })
        ));
    }

    #[test]
    fn doc_forms_round_trip() {
        for c in [
            CoIdeal::boxed(&mi(&[3, 2])).unwrap(),
            CoIdeal::total_degree(2, 4).unwrap(),
            CoIdeal::from_members(2, vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[0, 1]), mi(&[2, 0])])
                .unwrap(),
        ] {
            let json = serde_json::to_string(&c.to_doc()).unwrap();
            let back: CoIdealDoc = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_coideal().unwrap(), c);
        }
        let d: CoIdealDoc = serde_json::from_str(r#"{"q":2,"box":[2,2]}"#).unwrap();
        assert_eq!(d.to_coideal().unwrap().len(), 9);
    }
}
