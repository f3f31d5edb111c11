//! Finite groups: direct sums of cyclic groups (exponent-tuple elements,
//! exact subgroup arithmetic) and generic finite groups given by a Cayley
//! table or by permutation generators.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// A finite abelian group Z_{n_1} + .. + Z_{n_k}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    orders: Vec<u64>,
}

/// An element of an [`AbelianGroup`], stored as one exponent per cyclic
/// summand, reduced mod the summand order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement(pub Vec<u64>);

impl AbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() || orders.iter().any(|&n| n == 0) {
            return Err(Error::usage("abelian group needs positive summand orders"));
        }
        Ok(AbelianGroup { orders })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.orders.len()])
    }

    pub fn element(&self, exps: &[i64]) -> Result<GroupElement> {
        if exps.len() != self.orders.len() {
            return Err(Error::usage(format!(
                "element has {} exponents, group has rank {}",
                exps.len(),
                self.orders.len()
            )));
        }
        Ok(GroupElement(
            exps.iter()
                .zip(&self.orders)
                .map(|(&e, &n)| e.rem_euclid(n as i64) as u64)
                .collect(),
        ))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.orders)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        )
    }

    pub fn mul_scalar(&self, a: &GroupElement, k: u64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &n)| (x as u128 * k as u128 % n as u128) as u64)
                .collect(),
        )
    }

    pub fn order_of(&self, a: &GroupElement) -> u64 {
        a.0.iter()
            .zip(&self.orders)
            .map(|(&x, &n)| n / num::integer::gcd(x, n))
            .fold(1, num::integer::lcm)
    }

    /// All elements in lexicographic exponent order.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![self.identity()];
        for (i, &n) in self.orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for e in out {
                for v in 0..n {
                    let mut e2 = e.clone();
                    e2.0[i] = v;
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }

    /// The cyclic subgroup generated by `a`, listed as a, 2a, .., ord*a = 0.
    pub fn cyclic_subgroup(&self, a: &GroupElement) -> Vec<GroupElement> {
        let ord = self.order_of(a);
        let mut out = Vec::with_capacity(ord as usize);
        let mut cur = a.clone();
        for _ in 0..ord {
            out.push(cur.clone());
            cur = self.add(&cur, a);
        }
        out
    }

    /// Subgroup generated by a set, as a sorted element list.
    pub fn span(&self, gens: &[GroupElement]) -> Vec<GroupElement> {
        let mut seen: BTreeSet<GroupElement> = BTreeSet::new();
        let mut queue: VecDeque<GroupElement> = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        while let Some(e) = queue.pop_front() {
            for g in gens {
                let f = self.add(&e, g);
                if seen.insert(f.clone()) {
                    queue.push_back(f);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Intersection of the cyclic subgroups generated by the given elements.
    ///
    /// The intersection is itself cyclic (it is a subgroup of the first
    /// cyclic factor); the returned generator is the smallest positive power
    /// of `gens[0]` lying in all the others, so the choice is canonical.
    pub fn cyclic_intersection(&self, gens: &[GroupElement]) -> GroupElement {
        assert!(!gens.is_empty());
        let others: Vec<BTreeSet<GroupElement>> = gens[1..]
            .iter()
            .map(|g| self.cyclic_subgroup(g).into_iter().collect())
            .collect();
        // The set of j with j*gens[0] in every <gens[i]> is a subgroup of
        // Z_ord, so its smallest positive member generates the intersection.
        let ord = self.order_of(&gens[0]);
        let mut cur = gens[0].clone();
        for _ in 1..ord {
            if others.iter().all(|s| s.contains(&cur)) {
                return cur;
            }
            cur = self.add(&cur, &gens[0]);
        }
        self.identity()
    }

    /// Discrete logarithm of `h` with respect to `base` inside the cyclic
    /// subgroup generated by `base`: smallest j >= 0 with j*base = h.
    pub fn dlog(&self, base: &GroupElement, h: &GroupElement) -> Option<u64> {
        let ord = self.order_of(base);
        let mut cur = self.identity();
        for j in 0..ord {
            if &cur == h {
                return Some(j);
            }
            cur = self.add(&cur, base);
        }
        None
    }
}

/// A character value tuple: for each abstract group generator, the exponent
/// of its eigenvalue as a power of the primitive root of that generator's
/// order.  Summing characters of tensor factors is componentwise mod n_j.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    pub vals: Vec<u64>,
    pub mods: Vec<u64>,
}

impl Character {
    pub fn trivial(mods: &[u64]) -> Self {
        Character {
            vals: vec![0; mods.len()],
            mods: mods.to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.mods, other.mods);
        Character {
            vals: self
                .vals
                .iter()
                .zip(&other.vals)
                .zip(&self.mods)
                .map(|((&a, &b), &m)| (a + b) % m)
                .collect(),
            mods: self.mods.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Character {
            vals: self
                .vals
                .iter()
                .zip(&self.mods)
                .map(|(&a, &m)| (m - a) % m)
                .collect(),
            mods: self.mods.clone(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.vals.iter().all(|&v| v == 0)
    }
}

/// A finite group presented by its Cayley table.  Elements are indices
/// 0..size with 0 the identity.
#[derive(Clone, Debug)]
pub struct CayleyGroup {
    pub name: String,
    table: Vec<u16>,
    size: usize,
    inv: Vec<u16>,
}

/// Hard cap on the order of groups expanded from permutation generators.
pub const CAYLEY_ORDER_CAP: usize = 512;

impl CayleyGroup {
    /// Build from an explicit table; `table[a][b]` is the product a*b.
    /// Row/column 0 must be the identity.  Associativity is spot-checked
    /// exhaustively up to order 64, on a deterministic stride beyond.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || n > CAYLEY_ORDER_CAP {
            return Err(Error::usage(format!(
                "group order must be in 1..={}",
                CAYLEY_ORDER_CAP
            )));
        }
        let mut flat = vec![0u16; n * n];
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::usage("Cayley table is not square"));
            }
            for (b, &p) in row.iter().enumerate() {
                if p >= n {
                    return Err(Error::usage("Cayley table entry out of range"));
                }
                flat[a * n + b] = p as u16;
            }
        }
        let g = CayleyGroup {
            name: name.to_string(),
            table: flat,
            size: n,
            inv: vec![0; n],
        };
        g.finish_validate()
    }

    fn finish_validate(mut self) -> Result<Self> {
        let n = self.size;
        for a in 0..n {
            if self.raw_mul(0, a) != a || self.raw_mul(a, 0) != a {
                return Err(Error::validation("element 0 is not an identity"));
            }
        }
        // inverses: each row must contain the identity exactly once
        for a in 0..n {
            let mut found = None;
            for b in 0..n {
                if self.raw_mul(a, b) == 0 {
                    if found.is_some() {
                        return Err(Error::validation("non-unique inverse in Cayley table"));
                    }
                    found = Some(b);
                }
            }
            match found {
                Some(b) => {
                    if self.raw_mul(b, a) != 0 {
                        return Err(Error::validation("one-sided inverse in Cayley table"));
                    }
                    self.inv[a] = b as u16;
                }
                None => return Err(Error::validation("missing inverse in Cayley table")),
            }
        }
        // associativity: exhaustive for small orders, strided sample beyond
        let check = |a: usize, b: usize, c: usize| -> bool {
            self.raw_mul(self.raw_mul(a, b), c) == self.raw_mul(a, self.raw_mul(b, c))
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Err(Error::validation("Cayley table is not associative"));
                        }
                    }
                }
            }
        } else {
            let stride = (n / 17).max(1);
            for a in (0..n).step_by(stride) {
                for b in (0..n).step_by(stride) {
                    for c in (0..n).step_by(stride) {
                        if !check(a, b, c) {
                            return Err(Error::validation("Cayley table is not associative"));
                        }
                    }
                }
            }
        }
        Ok(self)
    }

    fn raw_mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b] as usize
    }

    /// Cyclic group of order n.
    pub fn cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        CayleyGroup::from_table(&format!("Z{}", n), table).expect("cyclic table is a group")
    }

    /// Expand permutation generators (images of 0..deg-1) into the group
    /// they generate; errors if the order exceeds the cap.
    pub fn from_permutations(name: &str, gens: &[Vec<usize>]) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::usage("need at least one permutation generator"));
        }
        let deg = gens[0].len();
        for g in gens {
            if g.len() != deg {
                return Err(Error::usage("permutation generators of unequal degree"));
            }
            let mut seen = vec![false; deg];
            for &i in g {
                if i >= deg || seen[i] {
                    return Err(Error::usage("generator is not a permutation"));
                }
                seen[i] = true;
            }
        }
        let id: Vec<usize> = (0..deg).collect();
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        let mut index: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let base = elems[i].clone();
            for g in gens {
                let prod: Vec<usize> = (0..deg).map(|x| g[base[x]]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= CAYLEY_ORDER_CAP {
                        return Err(Error::usage(format!(
                            "permutation group exceeds order cap {}",
                            CAYLEY_ORDER_CAP
                        )));
                    }
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                    queue.push_back(elems.len() - 1);
                }
            }
        }
        let n = elems.len();
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..deg).map(|x| elems[a][elems[b][x]]).collect();
                table[a][b] = index[&prod];
            }
        }
        CayleyGroup::from_table(name, table)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.raw_mul(a, b)
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn order_of(&self, a: usize) -> u64 {
        let mut cur = a;
        let mut k = 1u64;
        while cur != 0 {
            cur = self.raw_mul(cur, a);
            k += 1;
        }
        k
    }

    pub fn elements_of_order(&self, m: u64) -> Vec<usize> {
        (0..self.size).filter(|&a| self.order_of(a) == m).collect()
    }

    /// Does the given set generate the whole group?
    pub fn generates(&self, gens: &[usize]) -> bool {
        let mut seen = vec![false; self.size];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut count = 1;
        while let Some(e) = queue.pop_front() {
            for &g in gens {
                let f = self.raw_mul(e, g);
                if !seen[f] {
                    seen[f] = true;
                    count += 1;
                    queue.push_back(f);
                }
            }
        }
        count == self.size
    }
}
