//! Relatively free algebras, exact variety membership with certificates,
//! identity-set comparison and multilinear identity spaces.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algcore::{
    closure, eval_polynomial, eval_term, greedy_generators, induce, FiniteAlgebra, Homomorphism, ProductSpace,
};
use crate::error::{Error, Result};
use crate::modring::matrix::{is_zero_vec, solve_left};
use crate::modring::{axpy, kernel, ReducedMatrix, Ring, RingElem};
use crate::sigterm::{enumerate_multilinear_monomials, Polynomial, Term, DEFAULT_DEPTH_CAP, DEFAULT_MONOMIAL_CAP};

/// Default cap on `Σ |S_i|^{|Z|}`.
pub const DEFAULT_COORDINATE_CAP: u64 = 100_000;

/// One coordinate of the product: a family member and an assignment of
/// the free generators to its elements (ambient vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinate {
    pub algebra: usize,
    pub values: Vec<Vec<RingElem>>,
}

/// The algebra generated by the tagged generators `h_z` inside the product
/// of the family over all coordinates.
#[derive(Debug, Clone)]
pub struct FreeAlgebraModel {
    pub family: Vec<FiniteAlgebra>,
    pub coordinates: Vec<Coordinate>,
    pub carrier: FiniteAlgebra,
    /// Carrier basis as vectors of the coordinate product.
    pub parent_basis: Vec<Vec<RingElem>>,
    /// `h_z` as carrier ambient vectors.
    pub generators: Vec<Vec<RingElem>>,
}

fn check_family(family: &[FiniteAlgebra], other: Option<&FiniteAlgebra>) -> Result<()> {
    let first = family
        .first()
        .ok_or_else(|| Error::InvalidArgument("the family must not be empty".into()))?;
    for a in family.iter().chain(other) {
        if a.ring() != first.ring() {
            return Err(Error::RingMismatch);
        }
        if a.sig() != first.sig() {
            return Err(Error::SignatureMismatch);
        }
    }
    Ok(())
}

/// Every assignment of `z` generators into every family member.
pub fn coordinates(family: &[FiniteAlgebra], z: usize, cap: u64) -> Result<Vec<Coordinate>> {
    let mut total: u128 = 0;
    for a in family {
        total = total.saturating_add(a.size().checked_pow(z as u32).unwrap_or(u128::MAX));
    }
    if total > cap as u128 {
        return Err(Error::cap("coordinates", cap));
    }
    let mut out = Vec::with_capacity(total as usize);
    for (i, a) in family.iter().enumerate() {
        let elems = a.elements(u128::MAX)?;
        let count = elems.len().pow(z as u32);
        for mut idx in 0..count {
            let mut values = vec![Vec::new(); z];
            for v in values.iter_mut().rev() {
                *v = elems[idx % elems.len()].clone();
                idx /= elems.len();
            }
            out.push(Coordinate { algebra: i, values });
        }
    }
    Ok(out)
}

fn coordinate_space<'a>(family: &'a [FiniteAlgebra], coords: &[Coordinate], extra: Option<&'a FiniteAlgebra>) -> ProductSpace<'a> {
    let mut blocks: Vec<&FiniteAlgebra> = coords.iter().map(|c| &family[c.algebra]).collect();
    blocks.extend(extra);
    ProductSpace::new(family[0].ring(), family[0].sig(), blocks).expect("family checked")
}

fn tagged(coords: &[Coordinate], j: usize) -> Vec<RingElem> {
    coords.iter().flat_map(|c| c.values[j].iter().copied()).collect()
}

fn build_model(family: &[FiniteAlgebra], coords: Vec<Coordinate>, z: usize) -> Result<FreeAlgebraModel> {
    let space = coordinate_space(family, &coords, None);
    let gens: Vec<Vec<RingElem>> = (0..z).map(|j| tagged(&coords, j)).collect();
    let c = closure(&space, &gens);
    let ind = induce(&space, &c.span)?;
    let generators = gens.iter().map(|g| ind.to_local(g)).collect();
    Ok(FreeAlgebraModel {
        family: family.to_vec(),
        coordinates: coords,
        carrier: ind.algebra.clone(),
        parent_basis: ind.basis.clone(),
        generators,
    })
}

/// The relatively free algebra of `var(family)` on `z` generators.
pub fn relatively_free(family: &[FiniteAlgebra], z: usize, cap: u64) -> Result<FreeAlgebraModel> {
    check_family(family, None)?;
    let coords = coordinates(family, z, cap)?;
    build_model(family, coords, z)
}

/// `B` is a quotient of the algebra generated by the tagged generators on a
/// subset of the coordinates.
#[derive(Debug, Clone)]
pub struct MemberWitness {
    pub model: FreeAlgebraModel,
    /// Generators of `B` matched with the model generators.
    pub targets: Vec<Vec<RingElem>>,
    pub map: Homomorphism,
}

/// An identity of the family that fails in `B`.
#[derive(Debug, Clone)]
pub struct NonMemberWitness {
    pub identity: Polynomial,
    pub arguments: Vec<Vec<RingElem>>,
    pub value: Vec<RingElem>,
}

#[derive(Debug, Clone)]
pub enum Membership {
    Member(Box<MemberWitness>),
    NonMember(NonMemberWitness),
    Undecided { reason: String },
}

impl Membership {
    pub fn verdict(&self) -> Option<bool> {
        match self {
            Membership::Member(_) => Some(true),
            Membership::NonMember(_) => Some(false),
            Membership::Undecided { .. } => None,
        }
    }

    pub fn is_member(&self) -> bool {
        self.verdict() == Some(true)
    }

    /// Re-checks the certificate from scratch.
    pub fn verify(&self, b: &FiniteAlgebra, family: &[FiniteAlgebra]) -> std::result::Result<(), String> {
        match self {
            Membership::Member(w) => w.verify(b, family),
            Membership::NonMember(w) => w.verify(b, family),
            Membership::Undecided { .. } => Ok(()),
        }
    }
}

impl MemberWitness {
    pub fn verify(&self, b: &FiniteAlgebra, family: &[FiniteAlgebra]) -> std::result::Result<(), String> {
        let m = &self.model;
        let carrier = &m.carrier;
        self.map.verify(carrier, b)?;
        if !self.map.is_surjective(b) {
            return Err("map onto B is not surjective".into());
        }
        for (g, t) in m.generators.iter().zip(&self.targets) {
            if self.map.apply(carrier, g) != *t {
                return Err("generator is not sent to its target".into());
            }
        }
        let ring = carrier.ring();
        let mut offset = 0;
        for c in &m.coordinates {
            let s = family.get(c.algebra).ok_or("coordinate refers to a missing family member")?;
            let images = m.parent_basis.iter().map(|p| p[offset..offset + s.rank()].to_vec()).collect();
            Homomorphism::new(images).verify(carrier, s)?;
            offset += s.rank();
        }
        let span = ReducedMatrix::reduce(ring, offset, m.parent_basis.clone()).map_err(|e| e.to_string())?;
        if span.size() != carrier.size() {
            return Err("carrier does not embed into the coordinate product".into());
        }
        Ok(())
    }
}

impl NonMemberWitness {
    pub fn verify(&self, b: &FiniteAlgebra, family: &[FiniteAlgebra]) -> std::result::Result<(), String> {
        let value = eval_polynomial(b, &self.identity, &self.arguments);
        if value != self.value || is_zero_vec(&value) {
            return Err("witness does not evaluate to the recorded nonzero value".into());
        }
        for s in family {
            match s.is_identity(&self.identity, u128::MAX) {
                Ok(true) => {}
                Ok(false) => return Err("witness is not an identity of the family".into()),
                Err(e) => return Err(e.to_string()),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct MembershipOptions {
    pub coordinate_cap: u64,
    /// Seed for the coordinate order.
    pub seed: u64,
    /// Size of the first coordinate batch; batches grow fourfold.
    pub initial_batch: usize,
    /// Number of random coordinates tried when the full set exceeds the cap.
    pub sample_size: usize,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions { coordinate_cap: DEFAULT_COORDINATE_CAP, seed: 0, initial_batch: 64, sample_size: 16_384 }
    }
}

/// Decides `B ∈ var(family)` with default options.
pub fn var_member(b: &FiniteAlgebra, family: &[FiniteAlgebra]) -> Result<Membership> {
    var_member_with(b, family, &MembershipOptions::default())
}

/// Pairs the tagged generators with generators of `B` and closes. `B` is a
/// member iff the closure meets `0 × B` trivially. Restricting to a subset
/// of coordinates only enlarges that intersection, so a trivial
/// intersection on a subset already decides membership; non-membership
/// needs every coordinate.
pub fn var_member_with(b: &FiniteAlgebra, family: &[FiniteAlgebra], opts: &MembershipOptions) -> Result<Membership> {
    check_family(family, Some(b))?;
    let targets = greedy_generators(b);
    let z = targets.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (coords, complete) = match coordinates(family, z, opts.coordinate_cap) {
        Ok(mut c) => {
            c.shuffle(&mut rng);
            (c, true)
        }
        Err(e) if e.is_cap() => (sample_coordinates(family, z, opts.sample_size, &mut rng)?, false),
        Err(e) => return Err(e),
    };
    let ring = b.ring().clone();
    let mut batch = opts.initial_batch.max(1).min(coords.len());
    loop {
        let used = &coords[..batch];
        let space = coordinate_space(family, used, Some(b));
        let width = space_width(family, used);
        let gens: Vec<Vec<RingElem>> = (0..z)
            .map(|j| {
                let mut g = tagged(used, j);
                g.extend_from_slice(&targets[j]);
                g
            })
            .collect();
        let p = closure(&space, &gens);
        let left: Vec<Vec<RingElem>> = p.items.iter().map(|v| v[..width].to_vec()).collect();
        let ker = kernel(&ring, &left, width);
        let collision = ker.rows().iter().find_map(|c| {
            let mut value = vec![0; b.rank()];
            for (k, item) in p.items.iter().enumerate() {
                axpy(&ring, &mut value, c[k], &item[width..]);
            }
            (!is_zero_vec(&value)).then(|| (c.clone(), value))
        });
        match collision {
            None => {
                let model = build_model(family, used.to_vec(), z)?;
                let map = extract_map(&ring, &model, &p.items, width, b)?;
                return Ok(Membership::Member(Box::new(MemberWitness { model, targets, map })));
            }
            Some(_) if batch == coords.len() && !complete => {
                return Ok(Membership::Undecided {
                    reason: format!("no member certificate on {batch} sampled coordinates; the full set exceeds the cap"),
                });
            }
            Some((c, value)) if batch == coords.len() => {
                let mut identity = Polynomial::zero(&ring);
                for (k, &ck) in c.iter().enumerate() {
                    if ck != 0 {
                        identity.add_term(p.term(k), ck);
                    }
                }
                return Ok(Membership::NonMember(NonMemberWitness { identity, arguments: targets, value }));
            }
            Some(_) => batch = (batch * 4).min(coords.len()),
        }
    }
}

/// Random assignments, used when the full coordinate set is too large.
/// Only membership can be certified from them.
fn sample_coordinates(family: &[FiniteAlgebra], z: usize, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Coordinate>> {
    use rand::Rng;
    let elems: Vec<Vec<Vec<RingElem>>> = family.iter().map(|a| a.elements(1 << 20)).collect::<Result<_>>()?;
    Ok((0..count)
        .map(|_| {
            let i = rng.gen_range(0..family.len());
            let values = (0..z).map(|_| elems[i][rng.gen_range(0..elems[i].len())].clone()).collect();
            Coordinate { algebra: i, values }
        })
        .collect())
}

fn space_width(family: &[FiniteAlgebra], coords: &[Coordinate]) -> usize {
    coords.iter().map(|c| family[c.algebra].rank()).sum()
}

fn extract_map(
    ring: &std::sync::Arc<Ring>,
    model: &FreeAlgebraModel,
    items: &[Vec<RingElem>],
    width: usize,
    b: &FiniteAlgebra,
) -> Result<Homomorphism> {
    let left: Vec<Vec<RingElem>> = items.iter().map(|v| v[..width].to_vec()).collect();
    let mut images = Vec::with_capacity(model.parent_basis.len());
    for g in &model.parent_basis {
        let x = solve_left(ring, &left, g)
            .ok_or_else(|| Error::Inconsistent("carrier basis element outside the paired closure".into()))?;
        let mut img = vec![0; b.rank()];
        for (c, item) in x.iter().zip(items) {
            axpy(ring, &mut img, *c, &item[width..]);
        }
        images.push(img);
    }
    Ok(Homomorphism::new(images))
}

/// Outcome of comparing identity sets, with both membership certificates.
#[derive(Debug, Clone)]
pub struct IdEquality {
    pub a_in_var_b: Membership,
    pub b_in_var_a: Membership,
}

impl IdEquality {
    /// `None` when either direction is undecided and the other is not a
    /// non-member.
    pub fn verdict(&self) -> Option<bool> {
        match (self.a_in_var_b.verdict(), self.b_in_var_a.verdict()) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        }
    }
}

/// `Id(A) = Id(B)`, decided as mutual variety membership.
pub fn id_equal(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<IdEquality> {
    id_equal_with(a, b, &MembershipOptions::default())
}

pub fn id_equal_with(a: &FiniteAlgebra, b: &FiniteAlgebra, opts: &MembershipOptions) -> Result<IdEquality> {
    let fa = [a.clone()];
    let fb = [b.clone()];
    let (x, y) = rayon::join(|| var_member_with(a, &fb, opts), || var_member_with(b, &fa, opts));
    Ok(IdEquality { a_in_var_b: x?, b_in_var_a: y? })
}

/// The multilinear identities of degree `m` as a submodule of coefficient
/// vectors over the enumerated monomials.
#[derive(Debug, Clone)]
pub struct IdentitySpace {
    pub degree: usize,
    pub monomials: Vec<Term>,
    pub coefficients: ReducedMatrix,
    /// The monomial enumeration hit no cap.
    pub complete: bool,
    /// Some identity has a unit coefficient.
    pub has_unit_coefficient: bool,
}

impl IdentitySpace {
    pub fn polynomials(&self) -> Vec<Polynomial> {
        let ring = self.coefficients.ring();
        self.coefficients
            .rows()
            .iter()
            .map(|row| {
                Polynomial::from_terms(ring, self.monomials.iter().cloned().zip(row.iter().copied()).filter(|&(_, c)| c != 0))
            })
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.rows().len()
    }

    pub fn is_full(&self) -> bool {
        self.coefficients.size() == (self.coefficients.ring().size() as u128).pow(self.monomials.len() as u32)
    }
}

/// Kernel of the evaluation matrix whose rows are the multilinear
/// monomials of degree `m` and whose columns are the coordinates of their
/// values on all basis tuples.
pub fn multilinear_identities(a: &FiniteAlgebra, m: usize) -> Result<IdentitySpace> {
    let monos = enumerate_multilinear_monomials(a.sig(), m as u32, DEFAULT_DEPTH_CAP, DEFAULT_MONOMIAL_CAP)?;
    let ring = a.ring();
    let r = a.rank();
    let tuples = r.checked_pow(m as u32).filter(|&t| t.saturating_mul(r) <= 1 << 22).ok_or_else(|| Error::cap("evaluation columns", 1u64 << 22))?;
    let basis = a.basis_vectors();
    let rows: Vec<Vec<RingElem>> = monos
        .terms
        .iter()
        .map(|t| {
            let mut row = Vec::with_capacity(tuples * r);
            for mut idx in 0..tuples {
                let mut assign = vec![Vec::new(); m];
                for v in assign.iter_mut().rev() {
                    *v = basis[idx % r].clone();
                    idx /= r;
                }
                row.extend(eval_term(a, t, &assign));
            }
            row
        })
        .collect();
    let coefficients = kernel(ring, &rows, tuples * r);
    let has_unit_coefficient = (0..monos.terms.len()).any(|j| {
        let g = coefficients.rows().iter().fold(0, |acc, row| gcd_elem(ring, acc, row[j]));
        ring.is_unit(g)
    });
    Ok(IdentitySpace {
        degree: m,
        monomials: monos.terms,
        coefficients,
        complete: monos.complete,
        has_unit_coefficient,
    })
}

/// Generator of the ideal `(a, b)` of `k`.
fn gcd_elem(ring: &Ring, a: RingElem, b: RingElem) -> RingElem {
    if ring.is_field() {
        return if a != 0 || b != 0 { ring.one() } else { 0 };
    }
    let n = ring.size() as u64;
    crate::modring::gcd(crate::modring::gcd(a as u64, b as u64), n) as RingElem % n as RingElem
}

/// The first degree `<= max_degree` at which the multilinear identity
/// spaces differ, if any. A difference proves `Id(A) != Id(B)`.
pub fn identity_spaces_differ(a: &FiniteAlgebra, b: &FiniteAlgebra, max_degree: usize) -> Result<Option<usize>> {
    for m in 1..=max_degree {
        if multilinear_identities(a, m)?.coefficients != multilinear_identities(b, m)?.coefficients {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcore::{direct_product, quotient, testalg::*, Submodule};
    use crate::idealth::is_prime;
    use crate::sigterm::{parse_polynomial, Signature};

    fn field(p: u32) -> FiniteAlgebra {
        let r = Ring::modular(p).unwrap();
        let mut b = FiniteAlgebra::builder(&r, &Signature::binary("mul"), vec![p]);
        b.set("mul", &[0, 0], &[1]).unwrap();
        b.build().unwrap()
    }

    fn zero_alg(p: u32, rank: usize) -> FiniteAlgebra {
        zero_alg_in("mul", p, rank)
    }

    fn zero_alg_in(op: &str, p: u32, rank: usize) -> FiniteAlgebra {
        let r = Ring::modular(p).unwrap();
        FiniteAlgebra::builder(&r, &Signature::binary(op), vec![p; rank]).build().unwrap()
    }

    fn l_prime() -> FiniteAlgebra {
        let l = heisenberg();
        let p = direct_product(&[&l, &l]).unwrap();
        let zz = p.pack(&[&l.basis_vector(2), &l.basis_vector(2)]);
        quotient(&p.algebra, &Submodule::span(&p.algebra, &[zz]).unwrap()).unwrap().algebra
    }

    #[test]
    fn free_algebra_examples() {
        let f = relatively_free(&[field(2)], 1, DEFAULT_COORDINATE_CAP).unwrap();
        assert_eq!(f.carrier.size(), 2);
        let h = &f.generators[0];
        assert_eq!(f.carrier.apply(0, &[h, h]), *h);
        let z = relatively_free(&[field(2)], 0, DEFAULT_COORDINATE_CAP).unwrap();
        assert!(z.carrier.is_zero());
        let l = relatively_free(&[heisenberg()], 2, DEFAULT_COORDINATE_CAP).unwrap();
        assert_eq!(l.carrier.rank(), 3);
        assert!(relatively_free(&[heisenberg()], 6, 1000).unwrap_err().is_cap());
    }

    #[test]
    fn relative_freeness_at_low_degree() {
        for a in [a1(), sl2(), heisenberg(), field(3)] {
            let f = relatively_free(std::slice::from_ref(&a), 3, DEFAULT_COORDINATE_CAP).unwrap();
            for m in 1..=3 {
                assert_eq!(
                    multilinear_identities(&a, m).unwrap().coefficients,
                    multilinear_identities(&f.carrier, m).unwrap().coefficients
                );
            }
        }
    }

    #[test]
    fn field_free_algebra_properties() {
        for p in [2u32, 3] {
            let f = relatively_free(&[field(p)], 2, DEFAULT_COORDINATE_CAP).unwrap();
            let c = &f.carrier;
            let ring = c.ring().clone();
            let sig = c.sig().clone();
            let comm = parse_polynomial("mul(x1,x2) - mul(x2,x1)", &sig, &ring).unwrap();
            let assoc = parse_polynomial("mul(mul(x1,x2),x3) - mul(x1,mul(x2,x3))", &sig, &ring).unwrap();
            assert!(c.is_identity(&comm, u128::MAX).unwrap());
            assert!(c.is_identity(&assoc, u128::MAX).unwrap());
            let power = if p == 2 { "mul(x1,x1) - x1" } else { "mul(mul(x1,x1),x1) - x1" };
            let power = parse_polynomial(power, &sig, &ring).unwrap();
            for e in c.elements(u128::MAX).unwrap() {
                assert!(is_zero_vec(&eval_polynomial(c, &power, &[e])));
            }
            assert!(!is_prime(c).unwrap());
        }
    }

    #[test]
    fn membership_examples() {
        let l = heisenberg();
        let lp = l_prime();
        let m = var_member(&lp, std::slice::from_ref(&l)).unwrap();
        assert!(m.is_member());
        m.verify(&lp, std::slice::from_ref(&l)).unwrap();

        let f2 = field(2);
        let z = zero_alg(2, 1);
        let m = var_member(&f2, std::slice::from_ref(&z)).unwrap();
        assert_eq!(m.verdict(), Some(false));
        m.verify(&f2, std::slice::from_ref(&z)).unwrap();

        let m = var_member(&z, std::slice::from_ref(&f2)).unwrap();
        assert_eq!(m.verdict(), Some(false));
        m.verify(&z, std::slice::from_ref(&f2)).unwrap();

        let s = sl2();
        let h = crate::algcore::subalgebra_closure(&s, &[s.basis_vector(2)]).unwrap();
        let m = var_member(h.algebra(), std::slice::from_ref(&s)).unwrap();
        assert!(m.is_member());
        m.verify(h.algebra(), std::slice::from_ref(&s)).unwrap();
    }

    #[test]
    fn a1_and_a2_satisfy_the_same_identities() {
        let eq = id_equal(&a1(), &a2()).unwrap();
        assert_eq!(eq.verdict(), Some(true));
        eq.a_in_var_b.verify(&a1(), &[a2()]).unwrap();
        eq.b_in_var_a.verify(&a2(), &[a1()]).unwrap();
        assert_eq!(id_equal(&a1(), &a1()).unwrap().verdict(), Some(true));
        let eq = id_equal(&heisenberg(), &zero_alg_in("br", 2, 1)).unwrap();
        assert_eq!(eq.verdict(), Some(false));
    }

    #[test]
    fn tampered_certificates_fail() {
        let f2 = field(2);
        let z = zero_alg(2, 1);
        let Membership::NonMember(mut w) = var_member(&f2, std::slice::from_ref(&z)).unwrap() else { panic!() };
        w.value = vec![0];
        assert!(w.verify(&f2, std::slice::from_ref(&z)).is_err());
        let Membership::Member(mut w) = var_member(&z, std::slice::from_ref(&z)).unwrap() else { panic!() };
        w.map = Homomorphism::new(vec![vec![0]; w.model.carrier.rank()]);
        assert!(w.verify(&z, std::slice::from_ref(&z)).is_err());
    }

    #[test]
    fn small_batches_agree_with_full() {
        let opts = MembershipOptions { initial_batch: 1, ..Default::default() };
        for (b, fam) in [(a1(), a2()), (a2(), a1()), (heisenberg(), zero_alg_in("br", 2, 1)), (l_prime(), heisenberg())] {
            let x = var_member_with(&b, std::slice::from_ref(&fam), &opts).unwrap();
            let y = var_member(&b, std::slice::from_ref(&fam)).unwrap();
            assert_eq!(x.verdict(), y.verdict());
            x.verify(&b, std::slice::from_ref(&fam)).unwrap();
        }
    }

    #[test]
    fn sampling_certifies_membership_only() {
        let opts = MembershipOptions { coordinate_cap: 10, sample_size: 200, ..Default::default() };
        let m = var_member_with(&l_prime(), &[heisenberg()], &opts).unwrap();
        assert!(m.is_member());
        m.verify(&l_prime(), &[heisenberg()]).unwrap();
        let m = var_member_with(&field(2), &[zero_alg(2, 1)], &MembershipOptions { coordinate_cap: 1, ..opts }).unwrap();
        assert_eq!(m.verdict(), None);
    }

    #[test]
    fn identity_space_examples() {
        let a = a1();
        let s = multilinear_identities(&a, 3).unwrap();
        assert_eq!(s.monomials.len(), 12);
        assert!(s.is_full());
        assert!(s.has_unit_coefficient);
        let f = field(3);
        assert_eq!(multilinear_identities(&f, 1).unwrap().dimension(), 0);
        let s2 = multilinear_identities(&f, 2).unwrap();
        let comm = parse_polynomial("mul(x1,x2) - mul(x2,x1)", f.sig(), f.ring()).unwrap();
        let v: Vec<RingElem> = s2.monomials.iter().map(|t| comm.terms().find(|(u, _)| *u == t).map_or(0, |(_, c)| c)).collect();
        assert!(s2.coefficients.contains(&v));
        assert_eq!(identity_spaces_differ(&heisenberg(), &zero_alg_in("br", 2, 1), 3).unwrap(), Some(2));
        assert_eq!(identity_spaces_differ(&a1(), &a2(), 3).unwrap(), None);
    }

    #[test]
    fn torsion_identities_over_z4() {
        // x*x = 2x over Z/4: 2 mul(x1,x2) vanishes, mul(x1,x2) does not
        let r = Ring::modular(4).unwrap();
        let mut b = FiniteAlgebra::builder(&r, &Signature::binary("mul"), vec![4]);
        b.set("mul", &[0, 0], &[2]).unwrap();
        let a = b.build().unwrap();
        let s = multilinear_identities(&a, 2).unwrap();
        assert!(s.coefficients.contains(&[2, 0]));
        assert!(!s.coefficients.contains(&[1, 0]));
        assert!(s.has_unit_coefficient);
        assert!(!multilinear_identities(&a, 1).unwrap().has_unit_coefficient);
    }
}
