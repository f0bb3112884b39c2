//! Finite groups as explicit Cayley tables, their actions on finite sets,
//! subgroups and left cosets, and closure of permutation generators.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Axiom, Error, Result};
use crate::partition::Partition;

/// Upper bound on the order of any constructed or generated group.
pub const DEFAULT_ORDER_BOUND: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a Cayley table and computes identity and inverses.
    ///
    /// Checks run in the order shape, latin square, identity, inverse,
    /// associativity; the first failure is reported with its witness.
    pub fn from_cayley(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::AxiomViolation(Axiom::Shape { row: 0, col: 0 }));
        }
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::AxiomViolation(Axiom::Shape { row: r, col: row.len().min(n) }));
            }
            if let Some(c) = row.iter().position(|&x| x >= n) {
                return Err(Error::AxiomViolation(Axiom::Shape { row: r, col: c }));
            }
        }
        for (r, row) in table.iter().enumerate() {
            let mut seen = vec![false; n];
            for (c, &x) in row.iter().enumerate() {
                if seen[x] {
                    return Err(Error::AxiomViolation(Axiom::LatinSquare { row: r, col: c }));
                }
                seen[x] = true;
            }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for (r, row) in table.iter().enumerate() {
                let x = row[c];
                if seen[x] {
                    return Err(Error::AxiomViolation(Axiom::LatinSquare { row: r, col: c }));
                }
                seen[x] = true;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(Error::AxiomViolation(Axiom::Identity))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or(Error::AxiomViolation(Axiom::Inverse { element: x }))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::AxiomViolation(Axiom::Associativity { a, b, c }));
                    }
                }
            }
        }
        Ok(Self { order: n, table: table.iter().flatten().copied().collect(), identity, inverse, labels: None })
    }

    /// Builds a group from a flat table known to satisfy the axioms
    /// (e.g. composition of distinct permutations closed under products).
    pub(crate) fn from_trusted_table(order: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), order * order);
        let identity =
            (0..order).find(|&e| (0..order).all(|x| table[e * order + x] == x)).expect("trusted table has an identity");
        let mut inverse = vec![0; order];
        for x in 0..order {
            inverse[x] = (0..order).find(|&y| table[x * order + y] == identity).expect("trusted table has inverses");
        }
        Self { order, table, identity, inverse, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::InvalidArgument(format!("{} labels for a group of order {}", labels.len(), self.order)));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    /// Cayley table as nested rows.
    pub fn cayley(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn product(&self, word: &[usize]) -> usize {
        word.iter().fold(self.identity, |acc, &g| self.mul(acc, g))
    }

    /// First pair (a, b) with ab != ba, if any.
    pub fn non_commuting_pair(&self) -> Option<(usize, usize)> {
        (0..self.order)
            .flat_map(|a| (a + 1..self.order).map(move |b| (a, b)))
            .find(|&(a, b)| self.mul(a, b) != self.mul(b, a))
    }

    pub fn is_abelian(&self) -> bool {
        self.non_commuting_pair().is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    Cyclic,
    Dihedral,
    Symmetric,
}

/// Catalogue groups: cyclic `Z_n` (order n), dihedral `D_n` (order 2n,
/// elements `r^i s^f` at index `i + n f`) and symmetric `S_n` (order n!,
/// permutations in lexicographic order, product `(ab)(x) = a(b(x))`).
pub fn standard_group(kind: StandardKind, n: usize, bound: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidArgument("standard groups need n >= 1".into()));
    }
    let order = match kind {
        StandardKind::Cyclic => Some(n),
        StandardKind::Dihedral => n.checked_mul(2),
        StandardKind::Symmetric if n <= 6 => Some((1..=n).product()),
        StandardKind::Symmetric => None,
    };
    let order = match order {
        Some(o) if o <= bound => o,
        Some(o) => return Err(Error::SizeLimit { order: o, bound }),
        None => return Err(Error::SizeLimit { order: usize::MAX, bound }),
    };
    let group = match kind {
        StandardKind::Cyclic => {
            let table = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
            FiniteGroup::from_trusted_table(order, table).with_labels((0..n).map(|i| format!("{i}")).collect())?
        }
        StandardKind::Dihedral => {
            let mul = |a: usize, b: usize| {
                let (i, f) = (a % n, a / n);
                let (j, g) = (b % n, b / n);
                // r^i s^f r^j s^g = r^(i + (-1)^f j) s^(f+g)
                let k = if f == 0 { (i + j) % n } else { (i + n - j) % n };
                k + n * ((f + g) % 2)
            };
            let table = (0..order).flat_map(|a| (0..order).map(move |b| mul(a, b))).collect();
            let labels = (0..order).map(|a| if a < n { format!("r{a}") } else { format!("r{}s", a - n) }).collect();
            FiniteGroup::from_trusted_table(order, table).with_labels(labels)?
        }
        StandardKind::Symmetric => {
            let perms = permutations(n);
            let index: HashMap<&[usize], usize> = perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
            let mut table = Vec::with_capacity(order * order);
            for a in &perms {
                for b in &perms {
                    let ab: Vec<usize> = b.iter().map(|&x| a[x]).collect();
                    table.push(index[ab.as_slice()]);
                }
            }
            let labels = perms
                .iter()
                .map(|p| format!("[{}]", p.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")))
                .collect();
            FiniteGroup::from_trusted_table(order, table).with_labels(labels)?
        }
    };
    Ok(group)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// A group acting on the points `0..space_size`; `act(g, x)` is `g x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    group: Arc<FiniteGroup>,
    space_size: usize,
    table: Vec<usize>,
}

impl GroupAction {
    /// Validates `act[g][x]` against the group: bijective rows, identity
    /// acts trivially, and `(g1 g2) x = g1 (g2 x)`.
    pub fn new(group: Arc<FiniteGroup>, act: &[Vec<usize>]) -> Result<Self> {
        let n = group.order();
        if act.len() != n {
            return Err(Error::AxiomViolation(Axiom::Shape { row: act.len().min(n), col: 0 }));
        }
        let m = act[0].len();
        for (g, row) in act.iter().enumerate() {
            if row.len() != m {
                return Err(Error::AxiomViolation(Axiom::Shape { row: g, col: row.len().min(m) }));
            }
            let mut seen = vec![false; m];
            for &y in row {
                if y >= m || seen[y] {
                    return Err(Error::AxiomViolation(Axiom::NotBijective { row: g }));
                }
                seen[y] = true;
            }
        }
        let e = group.identity();
        if let Some(point) = (0..m).find(|&x| act[e][x] != x) {
            return Err(Error::AxiomViolation(Axiom::IdentityAction { point }));
        }
        for g1 in 0..n {
            for g2 in 0..n {
                let g12 = group.mul(g1, g2);
                if let Some(point) = (0..m).find(|&x| act[g12][x] != act[g1][act[g2][x]]) {
                    return Err(Error::AxiomViolation(Axiom::Compatibility { g1, g2, point }));
                }
            }
        }
        Ok(Self { group, space_size: m, table: act.iter().flatten().copied().collect() })
    }

    pub(crate) fn from_trusted(group: Arc<FiniteGroup>, space_size: usize, table: Vec<usize>) -> Self {
        debug_assert_eq!(table.len(), group.order() * space_size);
        Self { group, space_size, table }
    }

    /// Left-regular action of a group on itself.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let table = (0..n).flat_map(|g| (0..n).map(|x| group.mul(g, x)).collect::<Vec<_>>()).collect();
        Self { group, space_size: n, table }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn space_size(&self) -> usize {
        self.space_size
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.table[g * self.space_size + x]
    }

    /// The permutation of the point set induced by `g`.
    pub fn permutation(&self, g: usize) -> &[usize] {
        &self.table[g * self.space_size..(g + 1) * self.space_size]
    }

    /// Element acting exactly as `perm`, if any (smallest index).
    pub fn element_for(&self, perm: &[usize]) -> Option<usize> {
        self.group.elements().find(|&g| self.permutation(g) == perm)
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.space_size];
        let mut out: Vec<usize> = self
            .group
            .elements()
            .map(|g| self.act(g, point))
            .filter(|&y| !std::mem::replace(&mut seen[y], true))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn orbits(&self) -> Partition {
        let mut block = vec![usize::MAX; self.space_size];
        let mut blocks = Vec::new();
        for x in 0..self.space_size {
            if block[x] != usize::MAX {
                continue;
            }
            let orbit = self.orbit(x);
            for &y in &orbit {
                block[y] = blocks.len();
            }
            blocks.push(orbit);
        }
        Partition::new(blocks).expect("orbits partition the space")
    }

    pub fn is_transitive(&self) -> bool {
        self.orbits().len() == 1
    }

    pub fn isotropy_subgroup(&self, point: usize) -> Subgroup {
        let members = self.group.elements().filter(|&g| self.act(g, point) == point).collect();
        Subgroup::new(&self.group, members).expect("stabilisers are subgroups")
    }

    /// First point with a nontrivial stabiliser, if any.
    pub fn nontrivial_isotropy_point(&self) -> Option<usize> {
        (0..self.space_size).find(|&x| self.isotropy_subgroup(x).order() > 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent_order: usize,
    members: Vec<usize>,
}

impl Subgroup {
    /// Verifies closure under products and inverses.
    pub fn new(group: &FiniteGroup, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        let n = group.order();
        if let Some(&bad) = members.iter().find(|&&g| g >= n) {
            return Err(Error::NotASubgroup(format!("element {bad} out of range")));
        }
        let mut inside = vec![false; n];
        for &g in &members {
            inside[g] = true;
        }
        if !inside[group.identity()] {
            return Err(Error::NotASubgroup("identity missing".into()));
        }
        for &a in &members {
            if !inside[group.inv(a)] {
                return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
            }
            for &b in &members {
                if !inside[group.mul(a, b)] {
                    return Err(Error::NotASubgroup(format!("product of {a} and {b} missing")));
                }
            }
        }
        Ok(Self { parent_order: n, members })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Self { parent_order: group.order(), members: vec![group.identity()] }
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Self { parent_order: group.order(), members: group.elements().collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }
}

/// Left cosets `aH`, ordered by representative; the representative of a
/// coset is its smallest element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSpace {
    cosets: Vec<Vec<usize>>,
    representatives: Vec<usize>,
    coset_of: Vec<usize>,
}

impl CosetSpace {
    pub fn cosets(&self) -> &[Vec<usize>] {
        &self.cosets
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Coset index containing `g`.
    pub fn coset_of(&self, g: usize) -> usize {
        self.coset_of[g]
    }

    /// Index of the coset `g * (coset z)`.
    pub fn translate(&self, group: &FiniteGroup, g: usize, z: usize) -> usize {
        self.coset_of[group.mul(g, self.representatives[z])]
    }
}

pub fn left_cosets(group: &FiniteGroup, subgroup: &Subgroup) -> Result<CosetSpace> {
    if subgroup.parent_order() != group.order() {
        return Err(Error::NotASubgroup(format!(
            "subgroup of a group of order {} used with a group of order {}",
            subgroup.parent_order(),
            group.order()
        )));
    }
    let n = group.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut cosets = Vec::new();
    let mut representatives = Vec::new();
    for a in 0..n {
        if coset_of[a] != usize::MAX {
            continue;
        }
        let mut coset: Vec<usize> = subgroup.members().iter().map(|&h| group.mul(a, h)).collect();
        coset.sort_unstable();
        for &x in &coset {
            coset_of[x] = cosets.len();
        }
        // a is the first unvisited index, hence the smallest in its coset
        representatives.push(a);
        cosets.push(coset);
    }
    Ok(CosetSpace { cosets, representatives, coset_of })
}

/// A permutation group generated by explicit permutations of `0..points`.
#[derive(Debug, Clone)]
pub struct GeneratedGroup {
    pub group: Arc<FiniteGroup>,
    pub action: GroupAction,
    /// Element index of each generator.
    pub generators: Vec<usize>,
    /// Shortlex-minimal word (generator positions) for every element.
    pub words: Vec<Vec<usize>>,
}

/// Closes `generators` under composition by breadth-first search.
///
/// Elements are numbered in discovery order (identity first, then by
/// right-multiplying earlier elements with generators in list order), so
/// `words[g]` is the shortest, then lexicographically least, generator word
/// with `g = s_{w_1} s_{w_2} ... s_{w_k}`.
pub fn generate_permutation_group(points: usize, generators: &[Vec<usize>], bound: usize) -> Result<GeneratedGroup> {
    for (i, gen) in generators.iter().enumerate() {
        if gen.len() != points {
            return Err(Error::AxiomViolation(Axiom::Shape { row: i, col: gen.len().min(points) }));
        }
        let mut seen = vec![false; points];
        for &y in gen {
            if y >= points || seen[y] {
                return Err(Error::AxiomViolation(Axiom::NotBijective { row: i }));
            }
            seen[y] = true;
        }
    }
    let identity: Vec<usize> = (0..points).collect();
    let mut elements: Vec<Vec<usize>> = vec![identity.clone()];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (s, gen) in generators.iter().enumerate() {
            let next: Vec<usize> = gen.iter().map(|&x| elements[e][x]).collect();
            if index.contains_key(&next) {
                continue;
            }
            if elements.len() == bound {
                return Err(Error::SizeLimit { order: bound + 1, bound });
            }
            let mut word = words[e].clone();
            word.push(s);
            index.insert(next.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(next);
            words.push(word);
        }
    }
    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    let mut buf = vec![0; points];
    for a in &elements {
        for b in &elements {
            for x in 0..points {
                buf[x] = a[b[x]];
            }
            table.push(index[&buf]);
        }
    }
    let group = Arc::new(FiniteGroup::from_trusted_table(n, table));
    let generators = generators.iter().map(|g| index[g]).collect();
    let action = GroupAction::from_trusted(group.clone(), points, elements.concat());
    Ok(GeneratedGroup { group, action, generators, words })
}

/// First pair `(a1, a2)` with `map(a1 a2) != map(a1) map(a2)`, if any.
/// A map that is not total or points outside `target` yields `(a, a)` for
/// the first offending element.
pub fn homomorphism_violation(map: &[usize], source: &FiniteGroup, target: &FiniteGroup) -> Option<(usize, usize)> {
    if map.len() != source.order() {
        let a = map.len().min(source.order().saturating_sub(1));
        return Some((a, a));
    }
    if let Some(a) = map.iter().position(|&b| b >= target.order()) {
        return Some((a, a));
    }
    source
        .elements()
        .flat_map(|a1| source.elements().map(move |a2| (a1, a2)))
        .find(|&(a1, a2)| map[source.mul(a1, a2)] != target.mul(map[a1], map[a2]))
}

pub fn verify_homomorphism(map: &[usize], source: &FiniteGroup, target: &FiniteGroup) -> bool {
    homomorphism_violation(map, source, target).is_none()
}

/// Natural action of `S_n` (as built by [`standard_group`]) on `n` points.
pub fn symmetric_natural_action(n: usize) -> Result<GroupAction> {
    let group = Arc::new(standard_group(StandardKind::Symmetric, n, DEFAULT_ORDER_BOUND)?);
    let perms = permutations(n);
    Ok(GroupAction::from_trusted(group, n, perms.concat()))
}

/// Action of `Z_n` by cyclic shifts `x -> x + g (mod n)`.
pub fn cyclic_shift_action(n: usize) -> Result<GroupAction> {
    let group = Arc::new(standard_group(StandardKind::Cyclic, n, DEFAULT_ORDER_BOUND)?);
    let table = (0..n).flat_map(|g| (0..n).map(move |x| (x + g) % n)).collect();
    Ok(GroupAction::from_trusted(group, n, table))
}

/// The trivial group acting on `m` points.
pub fn trivial_action(m: usize) -> GroupAction {
    let group = Arc::new(FiniteGroup::from_trusted_table(1, vec![0]));
    GroupAction::from_trusted(group, m, (0..m).collect())
}
