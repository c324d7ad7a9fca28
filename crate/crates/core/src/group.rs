//! Finite abelian groups presented as direct sums of cyclic groups.
//!
//! Elements are indexed little-endian mixed-radix: the residue tuple
//! `(r_0, …, r_{k-1})` has index `r_0 + n_0 (r_1 + n_1 (r_2 + …))`. The dual
//! group reuses the moduli of the group, and the character with index `a`
//! acts by `χ_a(x) = exp(2πi Σ_j a_j x_j / n_j)`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::MAX_CONDUCTOR;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest group order accepted by [`FiniteAbelianGroup::new`].
pub const MAX_GROUP_ORDER: usize = 4096;

/// Default bound for exhaustive subgroup enumeration.
pub const DEFAULT_SUBGROUP_BOUND: usize = 64;

const CHARACTER_TABLE_LIMIT: usize = 1024;

struct GroupInner {
    moduli: Vec<usize>,
    order: usize,
    exponent: usize,
    characters: OnceLock<Vec<u32>>,
}

/// A direct sum `Z_{n_1} ⊕ … ⊕ Z_{n_k}`.
#[derive(Clone)]
pub struct FiniteAbelianGroup {
    inner: Arc<GroupInner>,
}

impl FiniteAbelianGroup {
    pub fn new(moduli: Vec<usize>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidGroup("empty moduli list".into()));
        }
        let mut order = 1usize;
        let mut exponent = 1usize;
        for &n in &moduli {
            if n == 0 {
                return Err(Error::InvalidGroup("modulus must be positive".into()));
            }
            order = order
                .checked_mul(n)
                .filter(|&o| o <= MAX_GROUP_ORDER)
                .ok_or(Error::BoundExceeded {
                    what: "group order",
                    actual: usize::MAX,
                    bound: MAX_GROUP_ORDER,
                })?;
            exponent = exponent.lcm(&n);
        }
        if exponent > MAX_CONDUCTOR as usize {
            return Err(Error::BoundExceeded {
                what: "group exponent",
                actual: exponent,
                bound: MAX_CONDUCTOR as usize,
            });
        }
        Ok(FiniteAbelianGroup {
            inner: Arc::new(GroupInner {
                moduli,
                order,
                exponent,
                characters: OnceLock::new(),
            }),
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn trivial() -> Self {
        Self::new(vec![1]).expect("trivial group")
    }

    pub fn moduli(&self) -> &[usize] {
        &self.inner.moduli
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    /// Least common multiple of the moduli.
    pub fn exponent(&self) -> usize {
        self.inner.exponent
    }

    pub fn conductor(&self) -> u32 {
        self.inner.exponent as u32
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn residues(&self, mut index: usize) -> Vec<usize> {
        self.moduli()
            .iter()
            .map(|&n| {
                let r = index % n;
                index /= n;
                r
            })
            .collect()
    }

    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement::new(self.residues(index))
    }

    pub fn index_of_residues(&self, residues: &[usize]) -> Result<usize> {
        if residues.len() != self.moduli().len()
            || residues.iter().zip(self.moduli()).any(|(&r, &n)| r >= n)
        {
            return Err(Error::ElementOutOfRange {
                group: self.to_string(),
                residues: residues.to_vec(),
            });
        }
        Ok(self.index_unchecked(residues))
    }

    pub fn index_of(&self, element: &GroupElement) -> Result<usize> {
        self.index_of_residues(element.residues())
    }

    fn index_unchecked(&self, residues: &[usize]) -> usize {
        residues
            .iter()
            .zip(self.moduli())
            .rev()
            .fold(0, |acc, (&r, &n)| acc * n + r)
    }

    /// Index of the element with residues reduced from arbitrary integers.
    pub fn index_of_reduced(&self, residues: &[i64]) -> usize {
        residues
            .iter()
            .zip(self.moduli())
            .rev()
            .fold(0, |acc, (&r, &n)| acc * n + r.rem_euclid(n as i64) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut stride = 1;
        for &n in self.moduli() {
            out += ((a % n + b % n) % n) * stride;
            a /= n;
            b /= n;
            stride *= n;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut stride = 1;
        for &n in self.moduli() {
            out += ((n - a % n) % n) * stride;
            a /= n;
            stride *= n;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, k: usize, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut stride = 1;
        for &n in self.moduli() {
            out += ((a % n) * (k % n) % n) * stride;
            a /= n;
            stride *= n;
        }
        out
    }

    /// Orbits `{x, -x}` in order of their smallest member, which comes first.
    pub fn inverse_orbits(&self) -> Vec<Vec<usize>> {
        self.elements()
            .filter_map(|x| {
                let y = self.neg(x);
                match x.cmp(&y) {
                    std::cmp::Ordering::Less => Some(vec![x, y]),
                    std::cmp::Ordering::Equal => Some(vec![x]),
                    std::cmp::Ordering::Greater => None,
                }
            })
            .collect()
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.residues(a)
            .iter()
            .zip(self.moduli())
            .fold(1, |acc, (&r, &n)| acc.lcm(&(n / n.gcd(&r))))
    }

    /// `k` with `χ_a(x) = ζ_e^k`, where `e` is the exponent.
    pub fn pairing_exponent(&self, a: usize, x: usize) -> usize {
        let order = self.order();
        if order <= CHARACTER_TABLE_LIMIT {
            let table = self.inner.characters.get_or_init(|| self.build_characters());
            return table[a * order + x] as usize;
        }
        self.pairing_exponent_direct(a, x)
    }

    fn pairing_exponent_direct(&self, a: usize, x: usize) -> usize {
        let e = self.exponent();
        let (ra, rx) = (self.residues(a), self.residues(x));
        self.moduli()
            .iter()
            .zip(ra.iter().zip(&rx))
            .fold(0, |acc, (&n, (&p, &q))| (acc + p * q % n * (e / n)) % e)
    }

    fn build_characters(&self) -> Vec<u32> {
        let n = self.order();
        let mut t = Vec::with_capacity(n * n);
        for a in 0..n {
            for x in 0..n {
                t.push(self.pairing_exponent_direct(a, x) as u32);
            }
        }
        t
    }

    /// `χ_a(x)` as a scalar of unit modulus.
    pub fn pairing<S: Scalar>(&self, a: usize, x: usize) -> S {
        S::root_of_unity(self.pairing_exponent(a, x) as u64, self.conductor())
    }

    /// The character group. Finite abelian groups are self-dual, so the
    /// moduli are reused and the pairing fixes the identification.
    pub fn dual(&self) -> Self {
        self.clone()
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        let mut moduli = self.moduli().to_vec();
        moduli.extend_from_slice(other.moduli());
        Self::new(moduli)
    }

    pub fn contains(&self, element: &GroupElement) -> bool {
        self.index_of(element).is_ok()
    }

    pub fn ensure_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GroupMismatch {
                expected: self.to_string(),
                found: other.to_string(),
            })
        }
    }
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.moduli() == other.moduli()
    }
}

impl Eq for FiniteAbelianGroup {}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moduli().iter().map(|n| format!("Z{n}")).collect();
        f.write_str(&parts.join("x"))
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAbelianGroup({self})")
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    /// Parses literals such as `Z4xZ2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty group literal".into()));
        }
        let moduli = s
            .split(['x', 'X', '×'])
            .map(|part| {
                let part = part.trim();
                let digits = part
                    .strip_prefix('Z')
                    .or_else(|| part.strip_prefix('z'))
                    .ok_or_else(|| Error::Parse(format!("expected Z<n>, found {part:?}")))?;
                let digits = digits.strip_prefix('_').unwrap_or(digits);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse(format!("bad modulus in {part:?}")));
                }
                digits
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad modulus {digits:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(moduli)
    }
}

impl Serialize for FiniteAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FiniteAbelianGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A residue tuple. Validity is checked against a group when it is used.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    residues: Vec<usize>,
}

impl GroupElement {
    pub fn new(residues: Vec<usize>) -> Self {
        GroupElement { residues }
    }

    pub fn residues(&self) -> &[usize] {
        &self.residues
    }
}

impl From<Vec<usize>> for GroupElement {
    fn from(residues: Vec<usize>) -> Self {
        Self::new(residues)
    }
}

/// All groups of order `n`, one per non-increasing factorization into
/// factors ≥ 2 (the trivial group for `n = 1`).
pub fn groups_of_order(n: usize) -> Vec<FiniteAbelianGroup> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        for f in (2..=max.min(rest)).rev() {
            if rest.is_multiple_of(f) {
                cur.push(f);
                rec(rest / f, f, cur, out);
                cur.pop();
            }
        }
    }
    if n == 1 {
        return vec![FiniteAbelianGroup::trivial()];
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.into_iter()
        .filter_map(|m| FiniteAbelianGroup::new(m).ok())
        .collect()
}

/// Every group from [`groups_of_order`] for orders `1..=max_order`.
pub fn groups_up_to(max_order: usize) -> Vec<FiniteAbelianGroup> {
    (1..=max_order).flat_map(groups_of_order).collect()
}

/// A subgroup, stored extensionally as a sorted list of element indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteAbelianGroup,
    elements: Vec<usize>,
    members: Vec<bool>,
    generators: Vec<GroupElement>,
}

impl Subgroup {
    pub fn trivial(parent: &FiniteAbelianGroup) -> Self {
        Self::from_members(parent.clone(), singleton(parent.order()), Vec::new())
    }

    pub fn whole(parent: &FiniteAbelianGroup) -> Self {
        let gens = parent
            .moduli()
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 1)
            .map(|(i, _)| {
                let mut r = vec![0; parent.moduli().len()];
                r[i] = 1;
                GroupElement::new(r)
            })
            .collect();
        Self::from_members(parent.clone(), vec![true; parent.order()], gens)
    }

    /// Smallest subgroup containing `gens`.
    pub fn from_generators(parent: &FiniteAbelianGroup, gens: &[GroupElement]) -> Result<Self> {
        let indices = gens
            .iter()
            .map(|g| parent.index_of(g))
            .collect::<Result<Vec<_>>>()?;
        let mut members = singleton(parent.order());
        for &g in &indices {
            extend_closure(parent, &mut members, g);
        }
        Ok(Self::from_members(parent.clone(), members, gens.to_vec()))
    }

    /// Validates that `elements` is closed under subtraction and contains 0.
    pub fn from_elements(parent: &FiniteAbelianGroup, elements: &[usize]) -> Result<Self> {
        let mut members = vec![false; parent.order()];
        for &e in elements {
            if e >= parent.order() {
                return Err(Error::NotSubgroup(format!("index {e} outside {parent}")));
            }
            members[e] = true;
        }
        if !members[0] {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        let list: Vec<usize> = (0..parent.order()).filter(|&i| members[i]).collect();
        for &a in &list {
            for &b in &list {
                if !members[parent.sub(a, b)] {
                    return Err(Error::NotSubgroup(format!(
                        "not closed: {:?} - {:?}",
                        parent.residues(a),
                        parent.residues(b)
                    )));
                }
            }
        }
        let gens = greedy_generators(parent, &list);
        Ok(Self::from_members(parent.clone(), members, gens))
    }

    fn from_members(parent: FiniteAbelianGroup, members: Vec<bool>, generators: Vec<GroupElement>) -> Self {
        let elements = (0..parent.order()).filter(|&i| members[i]).collect();
        Subgroup {
            parent,
            elements,
            members,
            generators,
        }
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.get(x).copied().unwrap_or(false)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.parent == other.parent && self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn ensure_in(&self, group: &FiniteAbelianGroup) -> Result<()> {
        if &self.parent == group {
            Ok(())
        } else {
            Err(Error::NotSubgroup(format!(
                "subgroup of {} used with {group}",
                self.parent
            )))
        }
    }

    /// Characters trivial on this subgroup, as a subgroup of the dual.
    pub fn annihilator(&self) -> Subgroup {
        let g = &self.parent;
        let members: Vec<bool> = g
            .elements()
            .map(|a| self.elements.iter().all(|&h| g.pairing_exponent(a, h) == 0))
            .collect();
        let list: Vec<usize> = (0..g.order()).filter(|&i| members[i]).collect();
        let gens = greedy_generators(g, &list);
        Self::from_members(g.dual(), members, gens)
    }

    /// This subgroup as an abstract group together with its embedding.
    pub fn presentation(&self) -> SubgroupPresentation {
        let g = &self.parent;
        let basis = quotient_basis(g, &self.elements, &singleton(g.order()));
        let moduli: Vec<usize> = if basis.is_empty() {
            vec![1]
        } else {
            basis.iter().map(|&(_, o)| o).collect()
        };
        let group = FiniteAbelianGroup::new(moduli).expect("subgroup presentation");
        let columns: Vec<usize> = basis.iter().map(|&(b, _)| b).collect();
        let embedding = if columns.is_empty() {
            Homomorphism::zero(&group, g)
        } else {
            Homomorphism::from_generator_images(&group, g, &columns)
                .expect("basis embedding is well defined")
        };
        let element_map = group.elements().map(|i| embedding.apply_index(i)).collect();
        SubgroupPresentation {
            group,
            embedding,
            element_map,
        }
    }

    pub fn quotient(&self) -> QuotientGroup {
        QuotientGroup::new(self)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let els: Vec<Vec<usize>> = self.elements.iter().map(|&e| self.parent.residues(e)).collect();
        write!(f, "Subgroup({} ⊇ {:?})", self.parent, els)
    }
}

fn singleton(order: usize) -> Vec<bool> {
    let mut m = vec![false; order];
    m[0] = true;
    m
}

/// Replace `members` (a subgroup) by the subgroup generated with `g`.
fn extend_closure(group: &FiniteAbelianGroup, members: &mut [bool], g: usize) {
    let base: Vec<usize> = (0..group.order()).filter(|&i| members[i]).collect();
    let mut shift = g;
    while !members[shift] {
        for &s in &base {
            members[group.add(s, shift)] = true;
        }
        shift = group.add(shift, g);
    }
}

fn greedy_generators(group: &FiniteAbelianGroup, elements: &[usize]) -> Vec<GroupElement> {
    let mut members = singleton(group.order());
    let mut gens = Vec::new();
    for &e in elements {
        if !members[e] {
            extend_closure(group, &mut members, e);
            gens.push(group.element(e));
        }
    }
    gens
}

/// Order of `x` modulo the subgroup with membership mask `n`.
fn order_modulo(group: &FiniteAbelianGroup, x: usize, n: &[bool]) -> usize {
    let mut k = 1;
    let mut y = x;
    while !n[y] {
        y = group.add(y, x);
        k += 1;
    }
    k
}

/// Elements of `h` whose images form a cyclic direct-sum basis of `h / n`,
/// paired with their orders in the quotient.
///
/// Picks an element `a` of maximal order, decomposes `h / (n + ⟨a⟩)`
/// recursively and lifts each basis element along `⟨a⟩` to one of equal order.
fn quotient_basis(group: &FiniteAbelianGroup, h: &[usize], n: &[bool]) -> Vec<(usize, usize)> {
    let mut best = (0usize, 1usize);
    for &x in h {
        let o = order_modulo(group, x, n);
        if o > best.1 {
            best = (x, o);
        }
    }
    let (a, oa) = best;
    if oa == 1 {
        return Vec::new();
    }
    let mut n2 = n.to_vec();
    extend_closure(group, &mut n2, a);
    let rest = quotient_basis(group, h, &n2);
    let mut basis = vec![(a, oa)];
    for (b, ob) in rest {
        let lifted = (0..oa)
            .map(|t| group.add(b, group.mul(t, a)))
            .find(|&c| order_modulo(group, c, n) == ob)
            .expect("a lift of equal order exists when a has maximal order");
        basis.push((lifted, ob));
    }
    basis
}

/// Every subgroup of `group`, ordered by `(size, element list)`.
pub fn all_subgroups(group: &FiniteAbelianGroup, max_order: usize) -> Result<Vec<Subgroup>> {
    if group.order() > max_order {
        return Err(Error::BoundExceeded {
            what: "group order",
            actual: group.order(),
            bound: max_order,
        });
    }
    let start = singleton(group.order());
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while let Some(s) = frontier.pop() {
        for g in group.elements() {
            if s[g] {
                continue;
            }
            let mut t = s.clone();
            extend_closure(group, &mut t, g);
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    let mut subgroups: Vec<Subgroup> = seen
        .into_iter()
        .map(|m| {
            let list: Vec<usize> = (0..group.order()).filter(|&i| m[i]).collect();
            let gens = greedy_generators(group, &list);
            Subgroup::from_members(group.clone(), m, gens)
        })
        .collect();
    subgroups.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    Ok(subgroups)
}

/// A subgroup `H ⊆ G` realised as an abstract group with an embedding.
#[derive(Clone, Debug)]
pub struct SubgroupPresentation {
    pub group: FiniteAbelianGroup,
    pub embedding: Homomorphism,
    /// presentation element index → parent element index
    pub element_map: Vec<usize>,
}

impl SubgroupPresentation {
    /// A subgroup `K ⊆ H` of the parent, expressed inside the presentation.
    pub fn pull_subgroup(&self, k: &Subgroup) -> Result<Subgroup> {
        k.ensure_in(self.embedding.target())?;
        let inside: Vec<usize> = self
            .group
            .elements()
            .filter(|&i| k.contains(self.element_map[i]))
            .collect();
        if inside.len() != k.order() {
            return Err(Error::NotSubgroup("not contained in the presented subgroup".into()));
        }
        Subgroup::from_elements(&self.group, &inside)
    }
}

/// `G / H` with canonical coset representatives and an abstract presentation.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    parent: FiniteAbelianGroup,
    subgroup: Subgroup,
    coset_reps: Vec<usize>,
    projection: Vec<usize>,
    group: FiniteAbelianGroup,
    coset_of_element: Vec<usize>,
    element_of_coset: Vec<usize>,
}

impl QuotientGroup {
    fn new(h: &Subgroup) -> Self {
        let g = h.parent().clone();
        let mut projection = vec![usize::MAX; g.order()];
        let mut coset_reps = Vec::new();
        for x in g.elements() {
            if projection[x] != usize::MAX {
                continue;
            }
            let c = coset_reps.len();
            coset_reps.push(x);
            for &y in h.elements() {
                projection[g.add(x, y)] = c;
            }
        }
        let all: Vec<usize> = g.elements().collect();
        let basis = quotient_basis(&g, &all, &h.members);
        let moduli: Vec<usize> = if basis.is_empty() {
            vec![1]
        } else {
            basis.iter().map(|&(_, o)| o).collect()
        };
        let group = FiniteAbelianGroup::new(moduli).expect("quotient presentation");
        let mut coset_of_element = Vec::with_capacity(group.order());
        for k in group.elements() {
            let r = group.residues(k);
            let x = basis
                .iter()
                .zip(&r)
                .fold(0, |acc, (&(b, _), &t)| g.add(acc, g.mul(t, b)));
            coset_of_element.push(projection[x]);
        }
        let mut element_of_coset = vec![0; coset_reps.len()];
        for (k, &c) in coset_of_element.iter().enumerate() {
            element_of_coset[c] = k;
        }
        QuotientGroup {
            parent: g,
            subgroup: h.clone(),
            coset_reps,
            projection,
            group,
            coset_of_element,
            element_of_coset,
        }
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    /// The quotient as an abstract group; functions on `G/H` live here.
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn num_cosets(&self) -> usize {
        self.coset_reps.len()
    }

    /// Smallest element index in each coset, in increasing order.
    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    /// Coset index of a parent element.
    pub fn coset_of(&self, x: usize) -> usize {
        self.projection[x]
    }

    /// Element of the presentation group that `x` projects to.
    pub fn project(&self, x: usize) -> usize {
        self.element_of_coset[self.projection[x]]
    }

    /// Canonical parent representative of a presentation element.
    pub fn lift(&self, k: usize) -> usize {
        self.coset_reps[self.coset_of_element[k]]
    }

    pub fn coset_of_element(&self, k: usize) -> usize {
        self.coset_of_element[k]
    }

    /// Image `K / H` of a subgroup `K ⊇ H` (or any subgroup) in the presentation.
    pub fn image_of(&self, k: &Subgroup) -> Result<Subgroup> {
        k.ensure_in(&self.parent)?;
        let mut image: Vec<usize> = k.elements().iter().map(|&x| self.project(x)).collect();
        image.sort_unstable();
        image.dedup();
        Subgroup::from_elements(&self.group, &image)
    }

    pub fn projection_hom(&self) -> Homomorphism {
        let images: Vec<usize> = unit_elements(&self.parent)
            .into_iter()
            .map(|e| self.project(e))
            .collect();
        Homomorphism::from_generator_images(&self.parent, &self.group, &images)
            .expect("projection is a homomorphism")
    }
}

fn unit_elements(g: &FiniteAbelianGroup) -> Vec<usize> {
    (0..g.moduli().len())
        .map(|i| {
            let mut r = vec![0; g.moduli().len()];
            r[i] = 1 % g.moduli()[i];
            g.index_unchecked(&r)
        })
        .collect()
}

/// A homomorphism given by an integer matrix with one row per target
/// coordinate and one column per source generator.
#[derive(Clone, Debug, PartialEq)]
pub struct Homomorphism {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    matrix: Vec<Vec<i64>>,
}

impl Homomorphism {
    pub fn new(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let (rows, cols) = (target.moduli().len(), source.moduli().len());
        if matrix.len() != rows || matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::IllDefinedHomomorphism(format!(
                "matrix must be {rows}x{cols}"
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            let m = target.moduli()[i] as i128;
            for (j, &a) in row.iter().enumerate() {
                let n = source.moduli()[j] as i128;
                if (n * a as i128).rem_euclid(m) != 0 {
                    return Err(Error::IllDefinedHomomorphism(format!(
                        "generator {j} has order {n} but {n}*{a} is nonzero mod {m}"
                    )));
                }
            }
        }
        Ok(Homomorphism {
            source: source.clone(),
            target: target.clone(),
            matrix,
        })
    }

    /// Homomorphism sending the `j`-th standard generator to `images[j]`.
    pub fn from_generator_images(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup, images: &[usize]) -> Result<Self> {
        let cols: Vec<Vec<usize>> = images.iter().map(|&i| target.residues(i)).collect();
        let matrix = (0..target.moduli().len())
            .map(|row| cols.iter().map(|c| c[row] as i64).collect())
            .collect();
        Self::new(source, target, matrix)
    }

    pub fn identity(g: &FiniteAbelianGroup) -> Self {
        let k = g.moduli().len();
        let matrix = (0..k)
            .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new(g, g, matrix).expect("identity")
    }

    pub fn zero(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup) -> Self {
        let matrix = vec![vec![0; source.moduli().len()]; target.moduli().len()];
        Self::new(source, target, matrix).expect("zero map")
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        let i = self.source.index_of(x)?;
        Ok(self.target.element(self.apply_index(i)))
    }

    pub fn apply_index(&self, x: usize) -> usize {
        let r = self.source.residues(x);
        let out: Vec<i64> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&r)
                    .fold(0i64, |acc, (&a, &x)| acc.wrapping_add(a.wrapping_mul(x as i64)))
            })
            .collect();
        self.target.index_of_reduced(&out)
    }

    /// The dual homomorphism `target^ → source^`, `b ↦ χ_b ∘ φ`.
    pub fn dual(&self) -> Homomorphism {
        let (n, m) = (self.source.moduli(), self.target.moduli());
        let matrix = (0..n.len())
            .map(|j| {
                (0..m.len())
                    .map(|i| (n[j] as i64 * self.matrix[i][j]).div_euclid(m[i] as i64))
                    .collect()
            })
            .collect();
        Homomorphism::new(&self.target.dual(), &self.source.dual(), matrix)
            .expect("dual of a well-defined homomorphism is well defined")
    }

    pub fn compose(&self, then: &Homomorphism) -> Result<Homomorphism> {
        self.target.ensure_same(&then.source)?;
        let images: Vec<usize> = unit_elements(&self.source)
            .into_iter()
            .map(|e| then.apply_index(self.apply_index(e)))
            .collect();
        Homomorphism::from_generator_images(&self.source, &then.target, &images)
    }

    pub fn kernel(&self) -> Subgroup {
        let list: Vec<usize> = self
            .source
            .elements()
            .filter(|&x| self.apply_index(x) == 0)
            .collect();
        Subgroup::from_elements(&self.source, &list).expect("kernel is a subgroup")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;

    fn g(m: &[usize]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(m.to_vec()).unwrap()
    }

    #[test]
    fn make_group_examples() {
        assert_eq!(g(&[2]).order(), 2);
        assert_eq!(g(&[4, 2]).order(), 8);
        assert_eq!(g(&[1]).order(), 1);
        assert!(FiniteAbelianGroup::new(vec![]).is_err());
        assert!(FiniteAbelianGroup::new(vec![3, 0]).is_err());
    }

    #[test]
    fn literal_round_trip() {
        let grp: FiniteAbelianGroup = "Z4xZ2".parse().unwrap();
        assert_eq!(grp.moduli(), &[4, 2]);
        assert_eq!(grp.to_string(), "Z4xZ2");
        assert!("Z4x".parse::<FiniteAbelianGroup>().is_err());
        assert!("Q4".parse::<FiniteAbelianGroup>().is_err());
        assert!("Z0".parse::<FiniteAbelianGroup>().is_err());
    }

    #[test]
    fn little_endian_indexing() {
        let grp = g(&[4, 2]);
        assert_eq!(grp.residues(5), vec![1, 1]);
        assert_eq!(grp.index_of_residues(&[3, 1]).unwrap(), 7);
        assert!(grp.index_of_residues(&[4, 0]).is_err());
        for i in grp.elements() {
            assert_eq!(grp.index_of_residues(&grp.residues(i)).unwrap(), i);
        }
    }

    #[test]
    fn subgroup_generation_examples() {
        let z4 = g(&[4]);
        let h = Subgroup::from_generators(&z4, &[vec![2].into()]).unwrap();
        assert_eq!(h.elements(), &[0, 2]);
        let t = Subgroup::from_generators(&z4, &[]).unwrap();
        assert_eq!(t.elements(), &[0]);
        let v = g(&[2, 2]);
        let d = Subgroup::from_generators(&v, &[vec![1, 1].into()]).unwrap();
        assert_eq!(d.elements(), &[0, 3]);
        assert!(Subgroup::from_generators(&z4, &[vec![4].into()]).is_err());
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(all_subgroups(&g(&[4]), 64).unwrap().len(), 3);
        assert_eq!(all_subgroups(&g(&[2, 2]), 64).unwrap().len(), 5);
        assert_eq!(all_subgroups(&g(&[1]), 64).unwrap().len(), 1);
        // Z2^3 has 16 subgroups, Z12 has 6
        assert_eq!(all_subgroups(&g(&[2, 2, 2]), 64).unwrap().len(), 16);
        assert_eq!(all_subgroups(&g(&[12]), 64).unwrap().len(), 6);
        assert!(all_subgroups(&g(&[128]), 64).is_err());
    }

    #[test]
    fn quotient_examples() {
        let z4 = g(&[4]);
        let h = Subgroup::from_generators(&z4, &[vec![2].into()]).unwrap();
        let q = h.quotient();
        assert_eq!(q.num_cosets(), 2);
        assert_eq!(q.coset_reps(), &[0, 1]);
        assert_eq!(q.group().moduli(), &[2]);
        assert_eq!(Subgroup::trivial(&z4).quotient().num_cosets(), 4);
        let g42 = g(&[4, 2]);
        let h = Subgroup::from_generators(&g42, &[vec![2, 0].into()]).unwrap();
        let q = h.quotient();
        assert_eq!(q.num_cosets(), 4);
        for x in g42.elements() {
            for y in g42.elements() {
                assert_eq!(q.coset_of(x) == q.coset_of(y), h.contains(g42.sub(x, y)));
            }
        }
    }

    #[test]
    fn annihilator_examples() {
        let z4 = g(&[4]);
        let h = Subgroup::from_generators(&z4, &[vec![2].into()]).unwrap();
        assert_eq!(h.annihilator().elements(), &[0, 2]);
        assert!(Subgroup::trivial(&z4).annihilator().is_whole());
        assert!(Subgroup::whole(&z4).annihilator().is_trivial());
    }

    #[test]
    fn pairing_examples() {
        let z4 = g(&[4]);
        assert_eq!(z4.pairing::<Cyclotomic>(1, 1), Cyclotomic::i());
        assert_eq!(z4.pairing::<Cyclotomic>(3, 0), Cyclotomic::one());
        let v = g(&[2, 2]);
        let a = v.index_of_residues(&[1, 1]).unwrap();
        let x = v.index_of_residues(&[1, 0]).unwrap();
        assert_eq!(v.pairing::<Cyclotomic>(a, x), Cyclotomic::from_int(-1));
        assert_eq!(z4.pairing::<Cyclotomic>(0, 3), Cyclotomic::one());
    }

    #[test]
    fn homomorphism_validation() {
        let (z2, z4) = (g(&[2]), g(&[4]));
        assert!(Homomorphism::new(&z2, &z4, vec![vec![2]]).is_ok());
        assert!(Homomorphism::new(&z2, &z4, vec![vec![1]]).is_err());
        let red = Homomorphism::new(&z4, &z2, vec![vec![1]]).unwrap();
        assert_eq!(red.apply(&vec![3].into()).unwrap(), vec![1].into());
        assert_eq!(red.kernel().elements(), &[0, 2]);
        let id = Homomorphism::identity(&g(&[4, 2]));
        for x in 0..8 {
            assert_eq!(id.apply_index(x), x);
        }
    }

    #[test]
    fn dual_homomorphism_respects_pairing() {
        let (z2, z4) = (g(&[2]), g(&[4]));
        let inc = Homomorphism::new(&z2, &z4, vec![vec![2]]).unwrap();
        let d = inc.dual();
        for b in z4.elements() {
            for x in z2.elements() {
                let kt = z4.pairing_exponent(b, inc.apply_index(x));
                let ks = z2.pairing_exponent(d.apply_index(b), x);
                assert_eq!((kt * 2) % 8, (ks * 4) % 8);
            }
        }
    }

    #[test]
    fn presentations_are_isomorphisms() {
        let grp = g(&[4, 2]);
        for h in all_subgroups(&grp, 64).unwrap() {
            let p = h.presentation();
            assert_eq!(p.group.order(), h.order());
            let mut imgs = p.element_map.clone();
            imgs.sort();
            assert_eq!(imgs, h.elements());
            let q = h.quotient();
            assert_eq!(q.group().order() * h.order(), grp.order());
            let pi = q.projection_hom();
            for x in grp.elements() {
                assert_eq!(pi.apply_index(x), q.project(x));
            }
        }
    }

    #[test]
    fn groups_enumeration() {
        let moduli: Vec<Vec<usize>> = groups_of_order(12).iter().map(|g| g.moduli().to_vec()).collect();
        assert_eq!(moduli, vec![vec![12], vec![6, 2], vec![4, 3], vec![3, 2, 2]]);
        assert_eq!(groups_of_order(1).len(), 1);
        assert_eq!(groups_of_order(8).len(), 3);
    }
}
