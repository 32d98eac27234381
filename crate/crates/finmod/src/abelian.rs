//! Finite abelian groups presented as direct sums of cyclic groups, their
//! elements, homomorphisms, and subgroups.
//!
//! A group with coordinate orders `d_1, ..., d_k` is the quotient of `Z^k` by
//! the diagonal relation lattice `D = diag(d) Z^k`. A subgroup corresponds to
//! an integer lattice `L` with `D <= L <= Z^k`, stored as its unique
//! upper-triangular Hermite basis. Byte-equality of bases is subgroup
//! equality, which makes representations canonical by construction.

use crate::arith::{
    self, gcd_i128, hnf_full_rank, lcm_i128, mat_mul, row_kernel, snf_with_v, Mat,
};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::ControlFlow;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element {
    pub coords: Vec<i64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<i64>) -> Result<Self> {
        if orders.iter().any(|&d| d < 1) {
            return Err(Error::MalformedInput(format!(
                "coordinate orders must be >= 1, got {orders:?}"
            )));
        }
        Ok(FiniteAbelianGroup { orders })
    }

    pub fn zero() -> Self {
        FiniteAbelianGroup { orders: vec![] }
    }

    pub fn cyclic(n: i64) -> Self {
        FiniteAbelianGroup { orders: vec![n] }
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn cardinality(&self) -> u128 {
        self.orders.iter().map(|&d| d as u128).product()
    }

    pub fn is_zero(&self) -> bool {
        self.cardinality() == 1
    }

    pub fn exponent(&self) -> i64 {
        self.orders
            .iter()
            .fold(1i128, |acc, &d| lcm_i128(acc, d as i128)) as i64
    }

    /// Invariant factors `s_1 | s_2 | ...` with every `s_i > 1`; the zero
    /// module yields an empty list. Two groups are isomorphic iff their
    /// invariant factor lists agree.
    pub fn invariant_factors(&self) -> Vec<i64> {
        let k = self.rank();
        if k == 0 {
            return vec![];
        }
        let diag: Mat = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { self.orders[i] as i128 } else { 0 })
                    .collect()
            })
            .collect();
        let (s, _, _) = snf_with_v(diag);
        s.iter().map(|&x| x as i64).filter(|&x| x > 1).collect()
    }

    pub fn element(&self, coords: Vec<i64>) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::MalformedInput(format!(
                "element has {} coordinates, ambient rank is {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(Element {
            coords: coords
                .iter()
                .zip(&self.orders)
                .map(|(&c, &d)| c.rem_euclid(d))
                .collect(),
        })
    }

    pub fn zero_element(&self) -> Element {
        Element {
            coords: vec![0; self.rank()],
        }
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1 % self.orders[i];
        Element { coords }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        Element {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.orders)
                .map(|((&x, &y), &d)| (x + y).rem_euclid(d))
                .collect(),
        }
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element {
            coords: a
                .coords
                .iter()
                .zip(&self.orders)
                .map(|(&x, &d)| (-x).rem_euclid(d))
                .collect(),
        }
    }

    pub fn scale(&self, c: i64, a: &Element) -> Element {
        Element {
            coords: a
                .coords
                .iter()
                .zip(&self.orders)
                .map(|(&x, &d)| ((c as i128 * x as i128).rem_euclid(d as i128)) as i64)
                .collect(),
        }
    }

    pub fn order_of(&self, a: &Element) -> i64 {
        a.coords
            .iter()
            .zip(&self.orders)
            .fold(1i128, |acc, (&x, &d)| {
                let ord = d as i128 / gcd_i128(d as i128, x as i128);
                lcm_i128(acc, ord)
            }) as i64
    }

    /// All elements in mixed-radix order. Callers are responsible for size
    /// guarding; the iterator itself is lazy.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        MixedRadix::new(self.orders.clone()).map(|coords| Element { coords })
    }

    /// The subgroup `{ x : e * x = 0 }` of elements killed by `e`.
    pub fn torsion(&self, e: i64) -> SubmoduleRep {
        let basis: Vec<Vec<i64>> = (0..self.rank())
            .map(|i| {
                let d = self.orders[i] as i128;
                let p = d / gcd_i128(d, e as i128);
                (0..self.rank())
                    .map(|j| if i == j { p as i64 } else { 0 })
                    .collect()
            })
            .collect();
        SubmoduleRep::from_hnf_basis(self, basis)
    }

    /// The subgroup `c * G`.
    pub fn scaled(&self, c: i64) -> SubmoduleRep {
        let basis: Vec<Vec<i64>> = (0..self.rank())
            .map(|i| {
                let d = self.orders[i] as i128;
                let p = gcd_i128(d, c as i128);
                (0..self.rank())
                    .map(|j| if i == j { p as i64 } else { 0 })
                    .collect()
            })
            .collect();
        SubmoduleRep::from_hnf_basis(self, basis)
    }

    /// Visit every subgroup whose index divides `max_index` (pass `u128::MAX`
    /// for all subgroups). Each subgroup is produced exactly once, in a
    /// deterministic order, as a canonical representation. The closure may
    /// stop the scan early via `ControlFlow::Break`.
    pub fn scan_subgroups<B>(
        &self,
        max_index: u128,
        mut f: impl FnMut(SubmoduleRep) -> ControlFlow<B>,
    ) -> Option<B> {
        let k = self.rank();
        let mut rows: Vec<Vec<i64>> = vec![vec![0; k]; k];
        scan_rows(&self.orders, &mut rows, k, 1, max_index, &mut |rows, card| {
            f(SubmoduleRep {
                orders: self.orders.clone(),
                basis: rows.to_vec(),
                cardinality: card,
            })
        })
    }

    pub fn subgroups(&self) -> Vec<SubmoduleRep> {
        let mut out = Vec::new();
        self.scan_subgroups::<()>(u128::MAX, |s| {
            out.push(s);
            ControlFlow::Continue(())
        });
        out.sort();
        out
    }

    pub fn count_subgroups(&self, cap: usize) -> usize {
        let mut n = 0usize;
        self.scan_subgroups::<()>(u128::MAX, |_| {
            n += 1;
            if n > cap {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        n
    }
}

/// Recursive subgroup scan: choose Hermite basis rows from the bottom row up.
/// Row `j` has pivot `p | d_j` at column `j` and free entries in columns
/// `m > j` reduced modulo the pivot of row `m`; the relation vector
/// `d_j * e_j` must lie in the span of rows `j..k` (pruned immediately).
fn scan_rows<B>(
    orders: &[i64],
    rows: &mut Vec<Vec<i64>>,
    j: usize,
    partial_index: u128,
    max_index: u128,
    f: &mut impl FnMut(&[Vec<i64>], u128) -> ControlFlow<B>,
) -> Option<B> {
    let k = orders.len();
    if j == 0 {
        let _ = partial_index;
        let card = (0..k)
            .map(|i| (orders[i] / rows[i][i]) as u128)
            .product::<u128>();
        match f(rows, card) {
            ControlFlow::Continue(()) => None,
            ControlFlow::Break(b) => Some(b),
        }
    } else {
        let j = j - 1;
        let d = orders[j];
        // candidate pivots: divisors of d_j
        let mut divs: Vec<i64> = (1..=d).filter(|p| d % p == 0).collect();
        divs.sort();
        // free-entry columns: m > j with pivot > 1
        let free: Vec<usize> = ((j + 1)..k).filter(|&m| rows[m][m] > 1).collect();
        for p in divs {
            let idx = partial_index.saturating_mul((d / p) as u128);
            if idx > max_index {
                continue;
            }
            let radices: Vec<i64> = free.iter().map(|&m| rows[m][m]).collect();
            let mut entries = vec![0i64; free.len()];
            loop {
                // install row j
                for c in rows[j].iter_mut() {
                    *c = 0;
                }
                rows[j][j] = p;
                for (t, &m) in free.iter().enumerate() {
                    rows[j][m] = entries[t];
                }
                if relation_in_span(orders, rows, j) {
                    if let Some(b) = scan_rows(orders, rows, j, idx, max_index, f) {
                        return Some(b);
                    }
                }
                // next mixed-radix entry vector
                let mut t = 0;
                loop {
                    if t == entries.len() {
                        break;
                    }
                    entries[t] += 1;
                    if entries[t] < radices[t] {
                        break;
                    }
                    entries[t] = 0;
                    t += 1;
                }
                if t == entries.len() {
                    break;
                }
            }
        }
        // restore: nothing to restore, row j is overwritten by callers
        None
    }
}

/// Is `d_j * e_j` in the span of rows `j..k`?
fn relation_in_span(orders: &[i64], rows: &[Vec<i64>], j: usize) -> bool {
    let k = orders.len();
    let mut v = vec![0i128; k];
    v[j] = orders[j] as i128;
    for m in j..k {
        let p = rows[m][m] as i128;
        if v[m] % p != 0 {
            return false;
        }
        let q = v[m] / p;
        if q != 0 {
            for c in m..k {
                v[c] -= q * rows[m][c] as i128;
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

struct MixedRadix {
    radices: Vec<i64>,
    current: Option<Vec<i64>>,
}

impl MixedRadix {
    fn new(radices: Vec<i64>) -> Self {
        let start = vec![0; radices.len()];
        MixedRadix {
            radices,
            current: Some(start),
        }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<i64>;
    fn next(&mut self) -> Option<Vec<i64>> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        let mut t = 0;
        loop {
            if t == next.len() {
                // overflow: iteration finished after yielding `cur`
                self.current = None;
                return Some(cur);
            }
            next[t] += 1;
            if next[t] < self.radices[t] {
                break;
            }
            next[t] = 0;
            t += 1;
        }
        self.current = Some(next);
        Some(cur)
    }
}

/// Canonical representation of a subgroup of a finite abelian group: the
/// Hermite basis of its preimage lattice in `Z^k`. Ordering is by
/// (cardinality, basis entries), which fixes the deterministic order used in
/// materialized lattices and certificates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubmoduleRep {
    orders: Vec<i64>,
    basis: Vec<Vec<i64>>,
    cardinality: u128,
}

impl PartialOrd for SubmoduleRep {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SubmoduleRep {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.cardinality, &self.basis, &self.orders).cmp(&(
            other.cardinality,
            &other.basis,
            &other.orders,
        ))
    }
}

impl SubmoduleRep {
    pub(crate) fn from_hnf_basis(group: &FiniteAbelianGroup, basis: Vec<Vec<i64>>) -> Self {
        let card = (0..group.rank())
            .map(|i| (group.orders[i] / basis[i][i]) as u128)
            .product();
        SubmoduleRep {
            orders: group.orders.clone(),
            basis,
            cardinality: card,
        }
    }

    pub fn from_lattice_rows(group: &FiniteAbelianGroup, rows: Mat) -> Self {
        let k = group.rank();
        let mut all = rows;
        // reduce generator entries modulo the ambient orders to keep the
        // Hermite reduction in small integers
        for r in all.iter_mut() {
            for (x, &d) in r.iter_mut().zip(&group.orders) {
                *x = x.rem_euclid(d as i128);
            }
        }
        for (i, &d) in group.orders.iter().enumerate() {
            let mut r = vec![0i128; k];
            r[i] = d as i128;
            all.push(r);
        }
        let h = hnf_full_rank(all, k);
        let basis: Vec<Vec<i64>> = h
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect();
        SubmoduleRep::from_hnf_basis(group, basis)
    }

    pub fn from_generators(group: &FiniteAbelianGroup, gens: &[Element]) -> Self {
        let rows: Mat = gens
            .iter()
            .map(|g| g.coords.iter().map(|&x| x as i128).collect())
            .collect();
        SubmoduleRep::from_lattice_rows(group, rows)
    }

    pub fn zero(group: &FiniteAbelianGroup) -> Self {
        SubmoduleRep::from_lattice_rows(group, vec![])
    }

    pub fn full(group: &FiniteAbelianGroup) -> Self {
        let k = group.rank();
        let rows: Mat = (0..k)
            .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
            .collect();
        SubmoduleRep::from_lattice_rows(group, rows)
    }

    pub fn ambient_orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn ambient(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup {
            orders: self.orders.clone(),
        }
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn cardinality(&self) -> u128 {
        self.cardinality
    }

    pub fn is_zero_submodule(&self) -> bool {
        self.cardinality == 1
    }

    pub fn is_full(&self) -> bool {
        self.basis.iter().enumerate().all(|(i, r)| r[i] == 1)
    }

    pub fn same_ambient(&self, other: &SubmoduleRep) -> bool {
        self.orders == other.orders
    }

    fn lattice_contains(&self, v: &[i128]) -> bool {
        let k = self.orders.len();
        let mut v = v.to_vec();
        for m in 0..k {
            let p = self.basis[m][m] as i128;
            if v[m] % p != 0 {
                return false;
            }
            let q = v[m] / p;
            if q != 0 {
                for c in m..k {
                    v[c] -= q * self.basis[m][c] as i128;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, el: &Element) -> bool {
        let v: Vec<i128> = el.coords.iter().map(|&x| x as i128).collect();
        self.lattice_contains(&v)
    }

    pub fn is_subset(&self, other: &SubmoduleRep) -> bool {
        debug_assert!(self.same_ambient(other));
        if self.cardinality > other.cardinality {
            return false;
        }
        self.basis.iter().all(|r| {
            let v: Vec<i128> = r.iter().map(|&x| x as i128).collect();
            other.lattice_contains(&v)
        })
    }

    pub fn join(&self, other: &SubmoduleRep) -> SubmoduleRep {
        debug_assert!(self.same_ambient(other));
        let mut rows: Mat = self
            .basis
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        rows.extend(
            other
                .basis
                .iter()
                .map(|r| r.iter().map(|&x| x as i128).collect::<Vec<i128>>()),
        );
        SubmoduleRep::from_lattice_rows(&self.ambient(), rows)
    }

    pub fn meet(&self, other: &SubmoduleRep) -> SubmoduleRep {
        debug_assert!(self.same_ambient(other));
        let k = self.orders.len();
        if k == 0 {
            return self.clone();
        }
        // rows (u | w) with u*A - w*B = 0; the intersection is spanned by u*A
        let mut stacked: Mat = Vec::with_capacity(2 * k);
        for r in &self.basis {
            stacked.push(r.iter().map(|&x| x as i128).collect());
        }
        for r in &other.basis {
            stacked.push(r.iter().map(|&x| -x as i128).collect());
        }
        let ker = row_kernel(stacked);
        let rows: Mat = ker
            .iter()
            .map(|z| {
                (0..k)
                    .map(|c| {
                        (0..k)
                            .map(|t| z[t] * self.basis[t][c] as i128)
                            .sum::<i128>()
                    })
                    .collect()
            })
            .collect();
        SubmoduleRep::from_lattice_rows(&self.ambient(), rows)
    }

    /// The subgroup `c * H`.
    pub fn scaled(&self, c: i64) -> SubmoduleRep {
        let rows: Mat = self
            .basis
            .iter()
            .map(|r| r.iter().map(|&x| x as i128 * c as i128).collect())
            .collect();
        SubmoduleRep::from_lattice_rows(&self.ambient(), rows)
    }

    /// Generators of the subgroup as ambient elements (the basis rows).
    pub fn generators(&self) -> Vec<Element> {
        let g = self.ambient();
        self.basis
            .iter()
            .map(|r| g.element(r.clone()).expect("basis row is a valid element"))
            .collect()
    }

    /// Quotient `G / H`: the quotient group in invariant-factor presentation
    /// together with the projection homomorphism.
    pub fn quotient(&self) -> (FiniteAbelianGroup, GroupHom) {
        let k = self.orders.len();
        let b: Mat = self
            .basis
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        if k == 0 {
            let q = FiniteAbelianGroup::zero();
            let hom = GroupHom::zero(&self.ambient(), &q);
            return (q, hom);
        }
        let (s, v, _) = snf_with_v(b);
        let kept: Vec<usize> = (0..k).filter(|&i| s[i] > 1).collect();
        let q = FiniteAbelianGroup {
            orders: kept.iter().map(|&i| s[i] as i64).collect(),
        };
        let matrix: Vec<Vec<i64>> = kept
            .iter()
            .map(|&i| {
                (0..k)
                    .map(|j| (v[j][i].rem_euclid(s[i])) as i64)
                    .collect()
            })
            .collect();
        let hom = GroupHom::new(&self.ambient(), &q, matrix).expect("projection is well defined");
        (q, hom)
    }

    /// Internal direct-sum decomposition of the subgroup: cyclic orders
    /// `s_1 | s_2 | ...` (all > 1) with independent generators, plus the data
    /// needed to convert between subgroup coordinates and ambient elements.
    pub fn decomposition(&self) -> SubgroupDecomp {
        let k = self.orders.len();
        let b: Mat = self
            .basis
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        if k == 0 {
            return SubgroupDecomp {
                ambient: self.ambient(),
                sub_orders: vec![],
                gens: vec![],
                basis: b,
                v: vec![],
                s_full: vec![],
            };
        }
        // relation matrix C with D = C * B (triangular solve per row)
        let mut c: Mat = Vec::with_capacity(k);
        for i in 0..k {
            let mut v = vec![0i128; k];
            v[i] = self.orders[i] as i128;
            let mut coeff = vec![0i128; k];
            for m in 0..k {
                let p = b[m][m];
                debug_assert_eq!(v[m] % p, 0, "diagonal relations lie in the lattice");
                let q = v[m] / p;
                coeff[m] = q;
                if q != 0 {
                    for t in m..k {
                        v[t] -= q * b[m][t];
                    }
                }
            }
            c.push(coeff);
        }
        let (s, v, vinv) = snf_with_v(c);
        let gmat = mat_mul(&vinv, &b);
        let ambient = self.ambient();
        let mut sub_orders = Vec::new();
        let mut gens = Vec::new();
        for t in 0..k {
            if s[t] > 1 {
                sub_orders.push(s[t] as i64);
                let coords: Vec<i64> = gmat[t]
                    .iter()
                    .zip(&self.orders)
                    .map(|(&x, &d)| (x.rem_euclid(d as i128)) as i64)
                    .collect();
                gens.push(ambient.element(coords).unwrap());
            }
        }
        SubgroupDecomp {
            ambient,
            sub_orders,
            gens,
            basis: b,
            v,
            s_full: s,
        }
    }
}

/// Decomposition of a subgroup `H` as `⊕ Z/s_t` with explicit generators.
pub struct SubgroupDecomp {
    pub ambient: FiniteAbelianGroup,
    pub sub_orders: Vec<i64>,
    pub gens: Vec<Element>,
    basis: Mat,
    v: Mat,
    s_full: Vec<i128>,
}

impl SubgroupDecomp {
    pub fn cardinality(&self) -> u128 {
        self.sub_orders.iter().map(|&s| s as u128).product()
    }

    pub fn from_coords(&self, coords: &[i64]) -> Element {
        let mut acc = self.ambient.zero_element();
        for (c, g) in coords.iter().zip(&self.gens) {
            acc = self.ambient.add(&acc, &self.ambient.scale(*c, g));
        }
        acc
    }

    /// Coordinates of a subgroup element with respect to the generators.
    /// The element must belong to the subgroup.
    pub fn coords_of(&self, el: &Element) -> Vec<i64> {
        let k = self.ambient.rank();
        let mut v: Vec<i128> = el.coords.iter().map(|&x| x as i128).collect();
        let mut u = vec![0i128; k];
        for m in 0..k {
            let p = self.basis[m][m];
            assert_eq!(v[m] % p, 0, "element not in subgroup");
            let q = v[m] / p;
            u[m] = q;
            if q != 0 {
                for t in m..k {
                    v[t] -= q * self.basis[m][t];
                }
            }
        }
        assert!(v.iter().all(|&x| x == 0), "element not in subgroup");
        // coordinates in ⊕ Z/s_t are u * V, keeping only s_t > 1
        let mut out = Vec::with_capacity(self.sub_orders.len());
        for t in 0..k {
            if self.s_full[t] > 1 {
                let val: i128 = (0..k).map(|m| u[m] * self.v[m][t]).sum();
                out.push(val.rem_euclid(self.s_full[t]) as i64);
            }
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        MixedRadix::new(self.sub_orders.clone()).map(|c| self.from_coords(&c))
    }

    /// Scan subgroups of `H` (as submodules of the ambient group), each
    /// produced once. `max_index` bounds the index within `H`.
    pub fn scan_subgroups<B>(
        &self,
        max_index: u128,
        mut f: impl FnMut(SubmoduleRep) -> ControlFlow<B>,
    ) -> Option<B> {
        let inner = FiniteAbelianGroup {
            orders: self.sub_orders.clone(),
        };
        let trivial_embedding = self.sub_orders == self.ambient.orders()
            && self
                .gens
                .iter()
                .enumerate()
                .all(|(i, g)| *g == self.ambient.basis_element(i));
        let ambient = &self.ambient;
        inner.scan_subgroups(max_index, |inner_sub| {
            let rep = if trivial_embedding {
                SubmoduleRep {
                    orders: ambient.orders().to_vec(),
                    basis: inner_sub.basis.clone(),
                    cardinality: inner_sub.cardinality,
                }
            } else {
                let gens: Vec<Element> = inner_sub
                    .basis
                    .iter()
                    .map(|row| self.from_coords(row))
                    .collect();
                SubmoduleRep::from_generators(ambient, &gens)
            };
            f(rep)
        })
    }
}

/// Homomorphism between finite abelian groups, stored as the matrix whose
/// column `j` is the image of the `j`-th domain generator. Well-definedness
/// requires `h[i][j] * d_j == 0 (mod e_i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupHom {
    domain_orders: Vec<i64>,
    codomain_orders: Vec<i64>,
    matrix: Vec<Vec<i64>>,
}

impl GroupHom {
    pub fn new(
        domain: &FiniteAbelianGroup,
        codomain: &FiniteAbelianGroup,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let k = domain.rank();
        let n = codomain.rank();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != k) {
            return Err(Error::MalformedInput(format!(
                "hom matrix must be {n} x {k}"
            )));
        }
        let matrix: Vec<Vec<i64>> = matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .map(|&x| x.rem_euclid(codomain.orders[i]))
                    .collect()
            })
            .collect();
        for i in 0..n {
            for j in 0..k {
                let prod = matrix[i][j] as i128 * domain.orders[j] as i128;
                if prod % codomain.orders[i] as i128 != 0 {
                    return Err(Error::MalformedInput(format!(
                        "entry ({i},{j}) = {} does not define a homomorphism: \
                         {} * {} is not divisible by {}",
                        matrix[i][j], matrix[i][j], domain.orders[j], codomain.orders[i]
                    )));
                }
            }
        }
        Ok(GroupHom {
            domain_orders: domain.orders.clone(),
            codomain_orders: codomain.orders.clone(),
            matrix,
        })
    }

    pub fn zero(domain: &FiniteAbelianGroup, codomain: &FiniteAbelianGroup) -> Self {
        GroupHom {
            domain_orders: domain.orders.clone(),
            codomain_orders: codomain.orders.clone(),
            matrix: vec![vec![0; domain.rank()]; codomain.rank()],
        }
    }

    pub fn identity(group: &FiniteAbelianGroup) -> Self {
        let k = group.rank();
        GroupHom {
            domain_orders: group.orders.clone(),
            codomain_orders: group.orders.clone(),
            matrix: (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| if i == j { 1 % group.orders[i] } else { 0 })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn domain(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup {
            orders: self.domain_orders.clone(),
        }
    }

    pub fn codomain(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup {
            orders: self.codomain_orders.clone(),
        }
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn apply(&self, el: &Element) -> Element {
        let coords: Vec<i64> = self
            .matrix
            .iter()
            .zip(&self.codomain_orders)
            .map(|(row, &e)| {
                let acc: i128 = row
                    .iter()
                    .zip(&el.coords)
                    .map(|(&h, &x)| h as i128 * x as i128)
                    .sum();
                acc.rem_euclid(e as i128) as i64
            })
            .collect();
        Element { coords }
    }

    /// `self ∘ other` (apply `other` first). Requires matching interfaces.
    pub fn compose(&self, other: &GroupHom) -> GroupHom {
        debug_assert_eq!(self.domain_orders, other.codomain_orders);
        let n = self.codomain_orders.len();
        let k = other.domain_orders.len();
        let inner = self.domain_orders.len();
        let matrix: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let acc: i128 = (0..inner)
                            .map(|t| self.matrix[i][t] as i128 * other.matrix[t][j] as i128)
                            .sum();
                        acc.rem_euclid(self.codomain_orders[i] as i128) as i64
                    })
                    .collect()
            })
            .collect();
        GroupHom {
            domain_orders: other.domain_orders.clone(),
            codomain_orders: self.codomain_orders.clone(),
            matrix,
        }
    }

    pub fn add(&self, other: &GroupHom) -> GroupHom {
        debug_assert_eq!(self.domain_orders, other.domain_orders);
        debug_assert_eq!(self.codomain_orders, other.codomain_orders);
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .zip(&self.codomain_orders)
            .map(|((r1, r2), &e)| {
                r1.iter()
                    .zip(r2)
                    .map(|(&a, &b)| (a + b).rem_euclid(e))
                    .collect()
            })
            .collect();
        GroupHom {
            domain_orders: self.domain_orders.clone(),
            codomain_orders: self.codomain_orders.clone(),
            matrix,
        }
    }

    pub fn kernel(&self) -> SubmoduleRep {
        let k = self.domain_orders.len();
        let n = self.codomain_orders.len();
        let domain = self.domain();
        if n == 0 {
            return SubmoduleRep::full(&domain);
        }
        // rows z = (x | w) of the kernel of the (k+n) x n matrix [h^T; diag(e)]
        let mut stacked: Mat = Vec::with_capacity(k + n);
        for j in 0..k {
            stacked.push((0..n).map(|i| self.matrix[i][j] as i128).collect());
        }
        for i in 0..n {
            stacked.push(
                (0..n)
                    .map(|c| {
                        if c == i {
                            self.codomain_orders[i] as i128
                        } else {
                            0
                        }
                    })
                    .collect(),
            );
        }
        let ker = row_kernel(stacked);
        let rows: Mat = ker.iter().map(|z| z[..k].to_vec()).collect();
        SubmoduleRep::from_lattice_rows(&domain, rows)
    }

    pub fn image(&self) -> SubmoduleRep {
        let codomain = self.codomain();
        let k = self.domain_orders.len();
        let gens: Vec<Element> = (0..k)
            .map(|j| {
                codomain
                    .element(self.matrix.iter().map(|r| r[j]).collect())
                    .unwrap()
            })
            .collect();
        SubmoduleRep::from_generators(&codomain, &gens)
    }

    /// Image of a submodule of the domain.
    pub fn image_of(&self, sub: &SubmoduleRep) -> SubmoduleRep {
        let codomain = self.codomain();
        let gens: Vec<Element> = sub
            .generators()
            .iter()
            .map(|g| self.apply(g))
            .collect();
        SubmoduleRep::from_generators(&codomain, &gens)
    }

    /// Preimage of a submodule of the codomain.
    pub fn preimage_of(&self, sub: &SubmoduleRep) -> SubmoduleRep {
        let k = self.domain_orders.len();
        let n = self.codomain_orders.len();
        let domain = self.domain();
        if n == 0 {
            return SubmoduleRep::full(&domain);
        }
        // x in preimage iff h*x lies in the lattice of `sub`; solve
        // x*h^T = u*B for integer u, i.e. (x | u) in the kernel of
        // [h^T; -B] and keep the x part.
        let mut stacked: Mat = Vec::with_capacity(k + n);
        for j in 0..k {
            stacked.push((0..n).map(|i| self.matrix[i][j] as i128).collect());
        }
        for r in sub.basis() {
            stacked.push(r.iter().map(|&x| -x as i128).collect());
        }
        let ker = row_kernel(stacked);
        let rows: Mat = ker.iter().map(|z| z[..k].to_vec()).collect();
        SubmoduleRep::from_lattice_rows(&domain, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn grp(orders: &[i64]) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(orders.to_vec()).unwrap()
    }

    /// Brute-force subgroup representation: the sorted element set.
    fn element_set(g: &FiniteAbelianGroup, s: &SubmoduleRep) -> BTreeSet<Vec<i64>> {
        g.elements()
            .filter(|e| s.contains(e))
            .map(|e| e.coords)
            .collect()
    }

    /// Brute-force closure of a generating set under addition.
    fn brute_span(g: &FiniteAbelianGroup, gens: &[Element]) -> BTreeSet<Vec<i64>> {
        let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
        set.insert(g.zero_element().coords);
        loop {
            let mut next = set.clone();
            for a in &set {
                let ae = Element { coords: a.clone() };
                for b in gens {
                    next.insert(g.add(&ae, b).coords);
                }
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    #[test]
    fn invariant_factors_merge_coprime_cyclics() {
        assert_eq!(grp(&[2, 3]).invariant_factors(), vec![6]);
        assert_eq!(grp(&[2, 4]).invariant_factors(), vec![2, 4]);
        assert_eq!(grp(&[4, 6]).invariant_factors(), vec![2, 12]);
        assert_eq!(grp(&[1, 1]).invariant_factors(), Vec::<i64>::new());
    }

    #[test]
    fn canonical_form_agrees_with_element_spans() {
        // several generator sets in Z4 x Z6, checked against brute force
        let g = grp(&[4, 6]);
        let gen_sets: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, 0]],
            vec![vec![2, 3]],
            vec![vec![1, 1]],
            vec![vec![2, 0], vec![0, 3]],
            vec![vec![3, 5]],
            vec![vec![0, 2], vec![2, 2]],
        ];
        for gens in gen_sets {
            let gens: Vec<Element> = gens.into_iter().map(|c| g.element(c).unwrap()).collect();
            let rep = SubmoduleRep::from_generators(&g, &gens);
            let brute = brute_span(&g, &gens);
            assert_eq!(element_set(&g, &rep), brute);
            assert_eq!(rep.cardinality() as usize, brute.len());
            // canonicality: rebuilding from the subgroup's own elements gives
            // byte-equal representation
            let all: Vec<Element> = brute
                .iter()
                .map(|c| g.element(c.clone()).unwrap())
                .collect();
            let rep2 = SubmoduleRep::from_generators(&g, &all);
            assert_eq!(rep, rep2);
        }
    }

    #[test]
    fn subgroup_scan_matches_brute_force_count() {
        // brute-force subgroup counts: enumerate all element subsets closed
        // under addition is too slow, so instead collect spans of all
        // element subsets of size <= 2, which generate every subgroup in
        // these small cases
        for orders in [vec![4i64], vec![2, 2], vec![2, 4], vec![8], vec![2, 2, 2], vec![12], vec![2, 6]] {
            let g = grp(&orders);
            let mut spans: BTreeSet<BTreeSet<Vec<i64>>> = BTreeSet::new();
            let els: Vec<Element> = g.elements().collect();
            for a in &els {
                for b in &els {
                    for c in &els {
                        spans.insert(brute_span(&g, &[a.clone(), b.clone(), c.clone()]));
                    }
                }
            }
            let scanned = g.subgroups();
            assert_eq!(scanned.len(), spans.len(), "orders {orders:?}");
            // and each scanned subgroup matches one span
            for s in &scanned {
                assert!(spans.contains(&element_set(&g, s)));
            }
        }
    }

    #[test]
    fn known_subgroup_counts() {
        // number of subspaces of F_2^n for n = 1..4: 2, 5, 16, 67
        assert_eq!(grp(&[2]).subgroups().len(), 2);
        assert_eq!(grp(&[2, 2]).subgroups().len(), 5);
        assert_eq!(grp(&[2, 2, 2]).subgroups().len(), 16);
        assert_eq!(grp(&[2, 2, 2, 2]).subgroups().len(), 67);
        // Z_{p^2} x Z_p has p^2 + 3p + 4 ... for p=2: 2+4+2+... known: 11? no:
        // subgroups of Z4 x Z2: 0, Z2 (3 of them), Z4 (2), Z2xZ2 (1), Z4xZ2 (1),
        // and the cyclic of order 2... count = 8
        assert_eq!(grp(&[2, 4]).subgroups().len(), 8);
        assert_eq!(grp(&[12]).subgroups().len(), 6);
    }

    #[test]
    fn meet_join_agree_with_element_sets() {
        let g = grp(&[4, 6]);
        let subs = g.subgroups();
        for a in subs.iter().step_by(3) {
            for b in subs.iter().step_by(4) {
                let sa = element_set(&g, a);
                let sb = element_set(&g, b);
                let meet = a.meet(b);
                let join = a.join(b);
                let expect_meet: BTreeSet<Vec<i64>> =
                    sa.intersection(&sb).cloned().collect();
                assert_eq!(element_set(&g, &meet), expect_meet);
                // join = span of union
                let union_gens: Vec<Element> = sa
                    .union(&sb)
                    .map(|c| g.element(c.clone()).unwrap())
                    .collect();
                assert_eq!(element_set(&g, &join), brute_span(&g, &union_gens));
            }
        }
    }

    #[test]
    fn hom_count_is_gcd_for_cyclic_groups() {
        // |Hom(Z_a, Z_b)| = gcd(a, b): count valid 1x1 matrices
        for (a, b) in [(4, 6), (8, 12), (5, 7), (9, 6)] {
            let d = grp(&[a]);
            let c = grp(&[b]);
            let count = (0..b)
                .filter(|&t| GroupHom::new(&d, &c, vec![vec![t]]).is_ok())
                .count() as i64;
            assert_eq!(count, num_integer::gcd(a, b));
        }
    }

    #[test]
    fn kernel_image_orders_multiply() {
        let d = grp(&[4, 6]);
        let c = grp(&[2, 12]);
        // doubling-ish map
        let h = GroupHom::new(&d, &c, vec![vec![1, 0], vec![0, 2]]).unwrap();
        let ker = h.kernel();
        let im = h.image();
        assert_eq!(
            ker.cardinality() * im.cardinality(),
            d.cardinality()
        );
        // kernel matches brute force
        let brute: BTreeSet<Vec<i64>> = d
            .elements()
            .filter(|e| {
                let y = h.apply(e);
                y.coords.iter().all(|&x| x == 0)
            })
            .map(|e| e.coords)
            .collect();
        assert_eq!(element_set(&d, &ker), brute);
        // image matches brute force
        let brute_im: BTreeSet<Vec<i64>> =
            d.elements().map(|e| h.apply(&e).coords).collect();
        assert_eq!(element_set(&c, &im), brute_im);
    }

    #[test]
    fn quotient_and_decomposition() {
        let g = grp(&[4, 6]);
        let h = SubmoduleRep::from_generators(&g, &[g.element(vec![2, 0]).unwrap()]);
        let (q, pi) = h.quotient();
        assert_eq!(q.cardinality(), 12);
        // projection is surjective with kernel h
        assert_eq!(element_set(&g, &pi.kernel()), element_set(&g, &h));
        let im: BTreeSet<Vec<i64>> = g.elements().map(|e| pi.apply(&e).coords).collect();
        assert_eq!(im.len(), 12);

        let dec = h.decomposition();
        assert_eq!(dec.cardinality(), 2);
        let els: Vec<Element> = dec.elements().collect();
        assert_eq!(els.len(), 2);
        for e in &els {
            assert!(h.contains(e));
            let back = dec.from_coords(&dec.coords_of(e));
            assert_eq!(&back, e);
        }
    }

    #[test]
    fn decomposition_subgroup_scan_matches_direct() {
        let g = grp(&[2, 4, 3]);
        let full = SubmoduleRep::full(&g);
        let dec = full.decomposition();
        let mut via_dec: Vec<SubmoduleRep> = Vec::new();
        dec.scan_subgroups::<()>(u128::MAX, |s| {
            via_dec.push(s);
            ControlFlow::Continue(())
        });
        via_dec.sort();
        via_dec.dedup();
        let direct = g.subgroups();
        assert_eq!(via_dec, direct);
    }

    #[test]
    fn torsion_and_scaled() {
        let g = grp(&[4, 6]);
        let t2 = g.torsion(2);
        let brute: BTreeSet<Vec<i64>> = g
            .elements()
            .filter(|e| g.scale(2, e).coords.iter().all(|&x| x == 0))
            .map(|e| e.coords)
            .collect();
        assert_eq!(element_set(&g, &t2), brute);
        let s2 = g.scaled(2);
        let brute2: BTreeSet<Vec<i64>> =
            g.elements().map(|e| g.scale(2, &e).coords).collect();
        assert_eq!(element_set(&g, &s2), brute2);
    }

    #[test]
    fn bounded_index_scan() {
        let g = grp(&[2, 2, 2, 2]);
        let mut low_index = Vec::new();
        g.scan_subgroups::<()>(2, |s| {
            low_index.push(s);
            ControlFlow::Continue(())
        });
        // full group + 15 hyperplanes
        assert_eq!(low_index.len(), 16);
    }

    #[test]
    fn zero_module_edge_cases() {
        let g = FiniteAbelianGroup::zero();
        assert!(g.is_zero());
        assert_eq!(g.subgroups().len(), 1);
        let s = SubmoduleRep::full(&g);
        assert!(s.is_zero_submodule() && s.is_full());
        let (q, _) = s.quotient();
        assert!(q.is_zero());
    }

    #[test]
    fn preimage_matches_brute_force() {
        let d = grp(&[4, 6]);
        let c = grp(&[2, 12]);
        let h = GroupHom::new(&d, &c, vec![vec![1, 0], vec![0, 2]]).unwrap();
        for sub in c.subgroups().iter().step_by(3) {
            let pre = h.preimage_of(sub);
            let brute: BTreeSet<Vec<i64>> = d
                .elements()
                .filter(|e| sub.contains(&h.apply(e)))
                .map(|e| e.coords)
                .collect();
            assert_eq!(element_set(&d, &pre), brute);
        }
    }
}
