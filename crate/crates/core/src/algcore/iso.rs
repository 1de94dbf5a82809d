//! Isomorphism search by backtracking over images of a generating set.

use super::space::{closure, ProductSpace};
use super::{FiniteAlgebra, Homomorphism};
use crate::modring::matrix::solve_left;
use crate::modring::{axpy, gcd, ReducedMatrix, RingElem};

pub const DEFAULT_ISO_NODE_CAP: u64 = 2_000_000;

/// Algebras up to this size use every element as a generator candidate.
const FULL_CANDIDATE_LIMIT: u128 = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic(Homomorphism),
    NotIsomorphic,
    /// The node cap was reached before the search finished.
    Undecided { nodes: u64 },
}

/// Additive order of an ambient vector.
pub fn additive_order(a: &FiniteAlgebra, v: &[RingElem]) -> u64 {
    let ring = a.ring();
    if ring.is_field_ext() {
        return if v.iter().all(|&x| x == 0) { 1 } else { ring.characteristic() as u64 };
    }
    (0..a.rank()).fold(1u64, |acc, i| {
        let d = a.orders()[i] as u64;
        let c = a.coefficient(v, i) as u64;
        let o = d / gcd(c, d);
        acc / gcd(acc, o) * o
    })
}

/// A generating set chosen greedily: repeatedly add the candidate whose
/// closure together with the current set is largest (first one on ties).
pub fn greedy_generators(a: &FiniteAlgebra) -> Vec<Vec<RingElem>> {
    let candidates: Vec<Vec<RingElem>> = if a.size() <= FULL_CANDIDATE_LIMIT {
        a.elements(FULL_CANDIDATE_LIMIT).expect("below limit").into_iter().skip(1).collect()
    } else {
        let basis = a.basis_vectors();
        let mut c = basis.clone();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                c.push(a.add(&basis[i], &basis[j]));
            }
        }
        c
    };
    let full = a.size();
    let mut gens: Vec<Vec<RingElem>> = Vec::new();
    let mut current = closure(a, &gens).span;
    while current.size() < full {
        let mut best: Option<(u128, usize)> = None;
        for (k, c) in candidates.iter().enumerate() {
            if current.contains(c) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(c.clone());
            let size = closure(a, &trial).span.size();
            if best.is_none_or(|(s, _)| size > s) {
                best = Some((size, k));
                if size == full {
                    break;
                }
            }
        }
        let (_, k) = best.expect("some candidate lies outside a proper closure");
        gens.push(candidates[k].clone());
        current = closure(a, &gens).span;
    }
    gens
}

fn module_profile(a: &FiniteAlgebra) -> Vec<u128> {
    let ring = a.ring();
    if ring.is_field_ext() {
        return vec![a.rank() as u128];
    }
    let n = ring.size() as u64;
    (1..=n)
        .filter(|t| n.is_multiple_of(*t))
        .map(|t| a.orders().iter().fold(1u128, |acc, &d| acc * gcd(t, d as u64) as u128))
        .collect()
}

/// Basic isomorphism invariants: ring, signature, size, module structure
/// and the size of every operation's image.
pub fn cheap_invariants_match(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    if a.ring() != b.ring() || a.sig() != b.sig() || a.size() != b.size() {
        return false;
    }
    if module_profile(a) != module_profile(b) {
        return false;
    }
    (0..a.sig().len()).all(|o| a.op_image(o).size() == b.op_image(o).size())
}

struct Search<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    space: ProductSpace<'a>,
    gens: Vec<Vec<RingElem>>,
    /// `|closure(gens[..=j])|` in `A`.
    prefix_sizes: Vec<u128>,
    candidates: Vec<Vec<Vec<RingElem>>>,
    nodes: u64,
    cap: u64,
    max_results: usize,
    found: Vec<Homomorphism>,
    exhausted: bool,
}

impl Search<'_> {
    fn paired(&self, images: &[Vec<RingElem>]) -> ReducedMatrix {
        let pairs: Vec<Vec<RingElem>> = self
            .gens
            .iter()
            .zip(images)
            .map(|(g, h)| g.iter().chain(h.iter()).copied().collect())
            .collect();
        closure(&self.space, &pairs).span
    }

    fn image_size(&self, p: &ReducedMatrix) -> u128 {
        let ra = self.a.rank();
        let rows: Vec<Vec<RingElem>> = p.rows().iter().map(|r| r[ra..].to_vec()).collect();
        ReducedMatrix::reduce_unchecked(self.b.ring(), self.b.rank(), rows).size()
    }

    fn extract(&self, p: &ReducedMatrix) -> Option<Homomorphism> {
        let ra = self.a.rank();
        let ring = self.a.ring();
        let left: Vec<Vec<RingElem>> = p.rows().iter().map(|r| r[..ra].to_vec()).collect();
        let mut images = Vec::with_capacity(ra);
        for e in self.a.basis_vectors() {
            let x = solve_left(ring, &left, &e)?;
            let mut img = vec![0; self.b.rank()];
            for (c, row) in x.iter().zip(p.rows()) {
                axpy(ring, &mut img, *c, &row[ra..]);
            }
            images.push(img);
        }
        Some(Homomorphism::new(images))
    }

    /// Returns false once the search must stop.
    fn run(&mut self, images: &mut Vec<Vec<RingElem>>) -> bool {
        let depth = images.len();
        if depth == self.gens.len() {
            let p = self.paired(images);
            if p.size() == self.a.size() && self.image_size(&p) == self.b.size() {
                if let Some(h) = self.extract(&p) {
                    if h.verify(self.a, self.b).is_ok() && h.is_bijective(self.a, self.b) {
                        self.found.push(h);
                        if self.found.len() >= self.max_results {
                            return false;
                        }
                    }
                }
            }
            return true;
        }
        for k in 0..self.candidates[depth].len() {
            self.nodes += 1;
            if self.nodes > self.cap {
                self.exhausted = true;
                return false;
            }
            images.push(self.candidates[depth][k].clone());
            let p = self.paired(images);
            let ok = p.size() == self.prefix_sizes[depth] && self.image_size(&p) == self.prefix_sizes[depth];
            if ok && !self.run(images) {
                images.pop();
                return false;
            }
            images.pop();
        }
        true
    }
}

fn search(a: &FiniteAlgebra, b: &FiniteAlgebra, cap: u64, max_results: usize) -> (Vec<Homomorphism>, bool) {
    if !cheap_invariants_match(a, b) {
        return (Vec::new(), true);
    }
    let gens = greedy_generators(a);
    let prefix_sizes: Vec<u128> = (1..=gens.len()).map(|j| closure(a, &gens[..j]).span.size()).collect();
    let b_elems = b.elements(super::MAX_ELEMENTS.max(b.size())).unwrap_or_default();
    let candidates = gens
        .iter()
        .map(|g| {
            let ord = additive_order(a, g);
            let single = closure(a, std::slice::from_ref(g)).span.size();
            b_elems
                .iter()
                .filter(|v| additive_order(b, v) == ord && closure(b, std::slice::from_ref(*v)).span.size() == single)
                .cloned()
                .collect()
        })
        .collect();
    let space = ProductSpace::new(a.ring(), a.sig(), vec![a, b]).expect("matching ring and signature");
    let mut s = Search {
        a,
        b,
        space,
        gens,
        prefix_sizes,
        candidates,
        nodes: 0,
        cap,
        max_results,
        found: Vec::new(),
        exhausted: false,
    };
    s.run(&mut Vec::new());
    let complete = !s.exhausted;
    (s.found, complete)
}

/// Finds an isomorphism `A → B` (the first in candidate order), proves
/// there is none, or reports the node cap.
pub fn iso_search(a: &FiniteAlgebra, b: &FiniteAlgebra, node_cap: u64) -> IsoOutcome {
    let (mut found, complete) = search(a, b, node_cap, 1);
    match (found.pop(), complete) {
        (Some(h), _) => IsoOutcome::Isomorphic(h),
        (None, true) => IsoOutcome::NotIsomorphic,
        (None, false) => IsoOutcome::Undecided { nodes: node_cap },
    }
}

/// All isomorphisms `A → B` (up to `max_results`); the flag is false when
/// the node cap cut the search short.
pub fn iso_search_all(a: &FiniteAlgebra, b: &FiniteAlgebra, node_cap: u64, max_results: usize) -> (Vec<Homomorphism>, bool) {
    let (found, complete) = search(a, b, node_cap, max_results.max(1));
    let complete = complete && found.len() < max_results.max(1);
    (found, complete)
}
