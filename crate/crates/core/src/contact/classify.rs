//! Deciding contactness: the determinant criterion, the combinatorial
//! classification for height at most two, and explicit contact forms.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::sequence::{build_contact_form, find_contact_sequence_with_map, ContactSequence};
use crate::algebra::{Functional, LieAlgebra};
use crate::error::{Error, Result};
use crate::index::{is_frobenius_h2, per_trial_failure, random_dual, symbolic_contact_pfaffian, SYMBOLIC_DIM_BOUND};
use crate::linalg::{q, Q};
use crate::poset::Poset;

/// Why a poset of height at most two is not contact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// A single element: the algebra is zero.
    SinglePoint,
    /// Connected posets of height one are never contact.
    ConnectedHeightOne,
    /// Disconnected (or height at most one) posets need exactly two
    /// components.
    ComponentCount { components: usize },
    /// A component that is not Frobenius.
    NonFrobeniusComponent { component: Vec<usize> },
    /// A cycle in the Hasse diagram of the extremal subposet. The second cycle
    /// is one in the Hasse diagram of the whole poset, when there is one.
    ExtCycle {
        ext_cycle: Vec<usize>,
        hasse_cycle: Option<Vec<usize>>,
    },
    /// An interior element whose neighborhood has the wrong number of
    /// extremal elements.
    NeighborhoodSize { element: usize, ext_size: usize },
    /// Interior elements whose neighborhood has two extremal elements; exactly
    /// one is required.
    ChainNeighborhoods { elements: Vec<usize> },
}

impl Obstruction {
    pub fn describe(&self) -> String {
        match self {
            Self::SinglePoint => "single point".into(),
            Self::ConnectedHeightOne => "connected height-one".into(),
            Self::ComponentCount { components } => format!("{components} components (need exactly 2)"),
            Self::NonFrobeniusComponent { component } => format!("component {component:?} is not Frobenius"),
            Self::ExtCycle { ext_cycle, hasse_cycle } => match hasse_cycle {
                Some(h) => format!("cycle {ext_cycle:?} in the extremal Hasse diagram (Hasse diagram cycle {h:?})"),
                None => format!("cycle {ext_cycle:?} in the extremal Hasse diagram"),
            },
            Self::NeighborhoodSize { element, ext_size } => {
                format!("neighborhood of {element} has {ext_size} extremal elements")
            }
            Self::ChainNeighborhoods { elements } => {
                format!("{} interior elements with two-element extremal neighborhoods: {elements:?}", elements.len())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// Connected case.
    Sequence(ContactSequence),
    /// Disconnected case: the element sets of the two Frobenius components.
    TwoFrobenius { components: [Vec<usize>; 2] },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Contact(Certificate),
    NotContact(Obstruction),
}

impl Classification {
    pub fn is_contact(&self) -> bool {
        matches!(self, Self::Contact(_))
    }
}

/// A cycle in the Hasse diagram of `P_Ext(P)`, if any.
pub fn cycle_obstruction(p: &Poset) -> Option<Vec<usize>> {
    p.is_forest(true).1
}

/// Combinatorial classification of contact type-A Lie poset algebras of
/// height at most two.
pub fn classify_h2(p: &Poset) -> Result<Classification> {
    let h = p.height();
    if h > 2 {
        return Err(Error::HeightBound { height: h, bound: 2 });
    }
    let comps = p.components();
    if comps.len() == 1 {
        if p.n() == 1 {
            return Ok(Classification::NotContact(Obstruction::SinglePoint));
        }
        if h == 1 {
            return Ok(Classification::NotContact(Obstruction::ConnectedHeightOne));
        }
        return classify_connected_h2(p);
    }
    if comps.len() != 2 {
        return Ok(Classification::NotContact(Obstruction::ComponentCount {
            components: comps.len(),
        }));
    }
    for c in &comps {
        let (sub, _) = p.induced(c);
        if !is_frobenius_h2(&sub)? {
            return Ok(Classification::NotContact(Obstruction::NonFrobeniusComponent {
                component: c.clone(),
            }));
        }
    }
    Ok(Classification::Contact(Certificate::TwoFrobenius {
        components: [comps[0].clone(), comps[1].clone()],
    }))
}

fn classify_connected_h2(p: &Poset) -> Result<Classification> {
    if let Some(ext_cycle) = cycle_obstruction(p) {
        return Ok(Classification::NotContact(Obstruction::ExtCycle {
            ext_cycle,
            hasse_cycle: p.is_forest(false).1,
        }));
    }
    let mut chains = Vec::new();
    for i in p.extremal_data().interior {
        let size = p.interior_neighborhood(i)?.poset.extremal_data().ext.len();
        match size {
            2 => chains.push(i),
            3 => {}
            _ => {
                return Ok(Classification::NotContact(Obstruction::NeighborhoodSize {
                    element: i,
                    ext_size: size,
                }))
            }
        }
    }
    if chains.len() != 1 {
        return Ok(Classification::NotContact(Obstruction::ChainNeighborhoods { elements: chains }));
    }
    match find_contact_sequence_with_map(p)? {
        Some((seq, _)) => Ok(Classification::Contact(Certificate::Sequence(seq))),
        None => Err(Error::NotContact(
            "classification conditions hold but no contact sequence was found".into(),
        )),
    }
}

/// Salgado's criterion: `phi` is a contact form iff `det [B^_phi] != 0`.
pub fn verify_contact_form(g: &LieAlgebra, phi: &Functional) -> Result<bool> {
    Ok(g.extended_matrix(phi)?.is_nonsingular())
}

/// Contact form on `g_A(p1 + p2)` for Frobenius `p1`, `p2`: a random regular
/// functional whose value on the central element
/// `|p2| sum_{p1} E_ii - |p1| sum_{p2} E_jj` is made nonzero by shifting its
/// diagonal coefficients on `p1` (which leaves `B_phi` unchanged).
pub fn disconnected_contact_form(p1: &Poset, p2: &Poset, seed: u64) -> Result<Functional> {
    for (k, p) in [p1, p2].into_iter().enumerate() {
        if !is_frobenius_h2(p)? {
            return Err(Error::NotFrobenius(format!("component {} is not Frobenius", k + 1)));
        }
    }
    let sum = p1.disjoint_sum(p2);
    let g = LieAlgebra::type_a(&sum)?;
    let dim = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 16;
    for _ in 0..ATTEMPTS {
        // random coefficients at every incidence position
        let mut terms: Vec<(usize, usize, Q)> = Vec::new();
        let diag = random_dual(sum.n(), &mut rng);
        for (i, c) in diag.into_iter().enumerate() {
            terms.push((i + 1, i + 1, c));
        }
        let rel = sum.relations();
        for ((i, j), c) in rel.iter().zip(random_dual(rel.len(), &mut rng)) {
            terms.push((*i, *j, c));
        }
        let phi = Functional::from_terms(terms.clone());
        if g.kirillov_matrix(&phi)?.rank() + 1 != dim {
            continue;
        }
        for t in 0..=(dim as i64 + 1) {
            let shifted = Functional::from_terms(
                terms
                    .iter()
                    .cloned()
                    .chain((1..=p1.n()).map(|i| (i, i, q(t)))),
            );
            if verify_contact_form(&g, &shifted)? {
                return Ok(shifted);
            }
        }
    }
    Err(Error::RegularSearchExhausted(ATTEMPTS))
}

/// An explicit contact form on `g_A(p)` in `p`'s labels when `p` is
/// classified contact; `None` otherwise.
pub fn contact_form(p: &Poset, seed: u64) -> Result<Option<Functional>> {
    match classify_h2(p)? {
        Classification::NotContact(_) => Ok(None),
        Classification::Contact(Certificate::Sequence(seq)) => {
            let (_, to_original) = find_contact_sequence_with_map(p)?.expect("classified contact");
            let phi = build_contact_form(&seq)?;
            Ok(Some(Functional::from_terms(
                phi.terms()
                    .into_iter()
                    .map(|(i, j, c)| (to_original[i - 1], to_original[j - 1], c)),
            )))
        }
        Classification::Contact(Certificate::TwoFrobenius { components }) => {
            let (p1, l1) = p.induced(&components[0]);
            let (p2, l2) = p.induced(&components[1]);
            let phi = disconnected_contact_form(&p1, &p2, seed)?;
            let label = |k: usize| if k <= l1.len() { l1[k - 1] } else { l2[k - 1 - l1.len()] };
            Ok(Some(Functional::from_terms(
                phi.terms().into_iter().map(|(i, j, c)| (label(i), label(j), c)),
            )))
        }
    }
}

/// The element `sum_{p != i} E_pp + (1 - n) E_ii + n E_{a,i}` (basis
/// coordinates of `g_A(p)`), where `i` is the unique interior element whose
/// neighborhood is a three-element chain and `a` the element below it.
pub fn expected_kernel(p: &Poset) -> Result<Vec<Q>> {
    let chains: Vec<usize> = p
        .extremal_data()
        .interior
        .into_iter()
        .filter(|&i| {
            p.interior_neighborhood(i)
                .map(|nb| nb.poset.extremal_data().ext.len() == 2)
                .unwrap_or(false)
        })
        .collect();
    let [i] = chains[..] else {
        return Err(Error::NotContact(format!(
            "expected one interior element with a chain neighborhood, found {}",
            chains.len()
        )));
    };
    let a = p.down_set(i)[0];
    let n = p.n() as i64;
    let mut entries: Vec<(usize, usize, Q)> = p
        .elements()
        .map(|e| (e, e, if e == i { q(1 - n) } else { q(1) }))
        .collect();
    entries.push((a, i, q(n)));
    LieAlgebra::type_a(p)?.coords_from_gl(&entries)
}

/// `ker B_phi` is exactly the line spanned by [`expected_kernel`].
pub fn kernel_is_expected(p: &Poset, phi: &Functional) -> Result<bool> {
    let g = LieAlgebra::type_a(p)?;
    let b = g.kirillov_matrix(phi)?;
    let l = expected_kernel(p)?;
    if b.mul_vec(&l)?.iter().any(|x| !x.is_zero()) {
        return Ok(false);
    }
    // l != 0 lies in the kernel, so it spans it iff rank B = dim - 1
    let full = g.dim() - 1;
    Ok(b.rank_mod_prime() == Some(full) || b.rank() == full)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ContactVerdict {
    /// A functional with `det [B^_phi] != 0`.
    Witness(Functional),
    /// No witness among the sampled functionals; `failure_bound` bounds the
    /// probability that a contact form exists anyway.
    NotContact { failure_bound: f64 },
    /// Proven: odd/even dimension, the combinatorial classification, or an
    /// identically vanishing Pfaffian.
    NotContactCertified(String),
}

/// Decides contactness of `g`: exactly for poset algebras of height at most
/// two and for algebras of dimension at most nine, by sampling otherwise.
pub fn is_contact(g: &LieAlgebra, trials: usize, seed: u64) -> Result<ContactVerdict> {
    let dim = g.dim();
    if dim.is_multiple_of(2) {
        return Ok(ContactVerdict::NotContactCertified(format!("even dimension {dim}")));
    }
    if let Some(p) = g.origin() {
        if p.height() <= 2 {
            return Ok(match contact_form(p, seed)? {
                Some(phi) => {
                    if !verify_contact_form(g, &phi)? {
                        return Err(Error::NotContact("constructed form failed verification".into()));
                    }
                    ContactVerdict::Witness(phi)
                }
                None => {
                    let Classification::NotContact(o) = classify_h2(p)? else {
                        unreachable!("contact posets have a form")
                    };
                    ContactVerdict::NotContactCertified(o.describe())
                }
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials.max(1) {
        let v = random_dual(dim, &mut rng);
        if g.extended_from_dual(&v).is_nonsingular() {
            return Ok(ContactVerdict::Witness(Functional::Dual(v)));
        }
    }
    if dim <= SYMBOLIC_DIM_BOUND && symbolic_contact_pfaffian(g)?.is_zero() {
        return Ok(ContactVerdict::NotContactCertified(
            "Pfaffian of the extended matrix vanishes identically".into(),
        ));
    }
    Ok(ContactVerdict::NotContact {
        failure_bound: per_trial_failure(dim + 1).powi(trials.max(1) as i32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::index_one_noncontact_example;

    #[test]
    fn small_classifications() {
        assert!(classify_h2(&Poset::chain(3)).unwrap().is_contact());
        assert!(classify_h2(&Poset::antichain(2)).unwrap().is_contact());
        assert_eq!(
            classify_h2(&Poset::chain(2)).unwrap(),
            Classification::NotContact(Obstruction::ConnectedHeightOne)
        );
        assert_eq!(
            classify_h2(&Poset::antichain(3)).unwrap(),
            Classification::NotContact(Obstruction::ComponentCount { components: 3 })
        );
        let square = Poset::new(4, &[(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
        assert_eq!(
            classify_h2(&square).unwrap(),
            Classification::NotContact(Obstruction::ConnectedHeightOne)
        );
        let p212 = Poset::complete(&[2, 1, 2]).unwrap();
        assert!(matches!(
            classify_h2(&p212).unwrap(),
            Classification::NotContact(Obstruction::ExtCycle { .. })
        ));
    }

    #[test]
    fn verdicts() {
        let g = LieAlgebra::type_a(&Poset::chain(3)).unwrap();
        assert!(matches!(is_contact(&g, 3, 1).unwrap(), ContactVerdict::Witness(_)));
        let even = LieAlgebra::type_a(&Poset::chain(2)).unwrap();
        assert!(matches!(is_contact(&even, 3, 1).unwrap(), ContactVerdict::NotContactCertified(_)));
        let fn2 = index_one_noncontact_example();
        assert!(matches!(is_contact(&fn2, 3, 1).unwrap(), ContactVerdict::NotContactCertified(_)));
        assert!(!verify_contact_form(&g, &Functional::zero_matrix()).unwrap());
    }

    #[test]
    fn kernel_of_chain() {
        let p = Poset::chain(3);
        let g = LieAlgebra::type_a(&p).unwrap();
        let l = expected_kernel(&p).unwrap();
        assert_eq!(
            g.coords_to_gl(&l),
            vec![(1, 1, q(1)), (1, 2, q(3)), (2, 2, q(-2)), (3, 3, q(1))]
        );
        let phi = contact_form(&p, 0).unwrap().unwrap();
        assert!(kernel_is_expected(&p, &phi).unwrap());
        assert!(!kernel_is_expected(&p, &Functional::from_terms([(1, 3, q(1))])).unwrap());
    }

    #[test]
    fn disconnected_forms() {
        let p112 = Poset::complete(&[1, 1, 2]).unwrap();
        for (a, b) in [(p112.clone(), p112.clone()), (Poset::chain(2), Poset::chain(2))] {
            let phi = disconnected_contact_form(&a, &b, 5).unwrap();
            let g = LieAlgebra::type_a(&a.disjoint_sum(&b)).unwrap();
            assert!(verify_contact_form(&g, &phi).unwrap());
        }
        assert!(matches!(
            disconnected_contact_form(&Poset::chain(3), &Poset::chain(2), 5),
            Err(Error::NotFrobenius(_))
        ));
    }
}
