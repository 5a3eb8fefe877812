//! Build scripts made of building blocks and gluing steps, the contact form
//! they determine, and the search for a script producing a given poset.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::gluing::{apply_gluing, valid_steps, BuildingBlock, GluingRule, GluingStep, StepLabels};
use crate::algebra::Functional;
use crate::canon::{canonical_labeling, CanonicalForm};
use crate::error::{Error, Result};
use crate::linalg::q;
use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContactSequence {
    pub steps: Vec<GluingStep>,
}

/// Result of replaying a sequence.
#[derive(Debug, Clone)]
pub struct Replay {
    pub poset: Poset,
    /// Block labels of every step, expressed in the final poset's labels.
    pub labels: Vec<StepLabels>,
}

impl ContactSequence {
    pub fn new(steps: Vec<GluingStep>) -> Self {
        Self { steps }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serializes")
    }

    /// Rebuilds the poset step by step; gluing failures are reported with the
    /// index of the failing step.
    pub fn replay(&self) -> Result<Replay> {
        let invalid = |step: usize, reason: String| Error::InvalidSequence { step, reason };
        let Some(first) = self.steps.first() else {
            return Err(invalid(0, "empty sequence".into()));
        };
        if first.rule.is_some() || first.x.is_some() || first.y.is_some() || first.z.is_some() {
            return Err(invalid(0, "the initial block takes no rule or targets".into()));
        }
        let mut poset = first.block.poset();
        let mut labels = vec![initial_labels(first.block)];
        for (j, step) in self.steps.iter().enumerate().skip(1) {
            if step.rule.is_none() {
                return Err(invalid(j, "missing gluing rule".into()));
            }
            let g = apply_gluing(&poset, step).map_err(|e| invalid(j, e.to_string()))?;
            for l in labels.iter_mut() {
                *l = l.map(|e| g.q_map[e - 1]);
            }
            labels.push(g.labels);
            poset = g.poset;
        }
        Ok(Replay { poset, labels })
    }

    /// Rules within the contact set and exactly one `P(1,1,1)` block.
    pub fn check_contact(&self) -> Result<()> {
        for (j, step) in self.steps.iter().enumerate().skip(1) {
            if let Some(rule) = step.rule {
                if !rule.is_contact_rule() {
                    return Err(Error::InvalidSequence {
                        step: j,
                        reason: format!("rule {rule} is not allowed in a contact sequence"),
                    });
                }
            }
        }
        let p111: Vec<usize> = self
            .steps
            .iter()
            .enumerate()
            .filter(|(_, s)| s.block == BuildingBlock::P111)
            .map(|(j, _)| j)
            .collect();
        if p111.len() != 1 {
            return Err(Error::InvalidSequence {
                step: p111.get(1).copied().unwrap_or(0),
                reason: format!("expected exactly one P111 block, found {}", p111.len()),
            });
        }
        Ok(())
    }
}

fn initial_labels(block: BuildingBlock) -> StepLabels {
    StepLabels {
        x: block.c(),
        m: block.m(),
        y: block.a1(),
        z: block.a2(),
    }
}

/// Terms contributed by the initial `P(1,1,1)`: `E*_{m,m} + E*_{c,a1} + E*_{m,a1}`.
fn initial_terms(l: &StepLabels) -> Vec<(usize, usize)> {
    let m = l.m.expect("P111 has a middle element");
    vec![(m, m), (l.x, l.y), (m, l.y)]
}

/// Terms added when a block is glued by a contact rule.
fn step_terms(block: BuildingBlock, rule: GluingRule, l: &StepLabels) -> Result<Vec<(usize, usize)>> {
    use BuildingBlock::*;
    use GluingRule::*;
    let (x, y) = (l.x, l.y);
    let m = || l.m.expect("block has a middle element");
    let z = || l.z.expect("block has two a elements");
    Ok(match (block, rule) {
        (P11, A1 | A2 | C) => vec![(x, y)],
        (P11, D1) => Vec::new(),
        (P211, A1 | A2 | C) => vec![(y, x), (z(), x), (z(), m())],
        (P211, D1) => vec![(z(), x), (z(), m())],
        (P211, D2) => vec![(y, x), (z(), m())],
        (P211, F) => vec![(z(), m())],
        (P112, A1 | A2 | C) => vec![(x, y), (x, z()), (m(), z())],
        (P112, D1) => vec![(x, z()), (m(), z())],
        (P112, D2) => vec![(x, y), (m(), z())],
        (P112, F) => vec![(m(), z())],
        _ => {
            return Err(Error::RulePreconditionViolated(format!(
                "no contact-form terms for {block} glued by {rule}"
            )))
        }
    })
}

fn terms_functional(terms: &[(usize, usize)]) -> Functional {
    Functional::from_terms(terms.iter().map(|&(i, j)| (i, j, q(1))))
}

/// The recursively defined contact form of a contact sequence, in the labels
/// of the final poset. Sequences that do not start with `P(1,1,1)` are first
/// rebuilt from their final poset with `P(1,1,1)` in front.
pub fn build_contact_form(seq: &ContactSequence) -> Result<Functional> {
    seq.check_contact()?;
    let replay = seq.replay()?;
    if seq.steps[0].block == BuildingBlock::P111 {
        return Ok(terms_functional(&form_terms(seq, &replay.labels)?));
    }
    let (rooted, to_original) = find_contact_sequence_with_map(&replay.poset)?.ok_or_else(|| {
        Error::InvalidSequence {
            step: 0,
            reason: "final poset admits no sequence starting with P111".into(),
        }
    })?;
    let rooted_replay = rooted.replay()?;
    let terms = form_terms(&rooted, &rooted_replay.labels)?;
    Ok(terms_functional(
        &terms
            .into_iter()
            .map(|(i, j)| (to_original[i - 1], to_original[j - 1]))
            .collect::<Vec<_>>(),
    ))
}

fn form_terms(seq: &ContactSequence, labels: &[StepLabels]) -> Result<Vec<(usize, usize)>> {
    let mut terms = initial_terms(&labels[0]);
    for (step, l) in seq.steps.iter().zip(labels).skip(1) {
        let rule = step.rule.expect("replayed steps have rules");
        terms.extend(step_terms(step.block, rule, l)?);
    }
    Ok(terms)
}

/// A contact sequence whose replay is isomorphic to `p`, if one exists.
pub fn find_contact_sequence(p: &Poset) -> Result<Option<ContactSequence>> {
    Ok(find_contact_sequence_with_map(p)?.map(|(s, _)| s))
}

/// Like [`find_contact_sequence`], also returning `to_original[k - 1]`, the
/// element of `p` that label `k` of the replayed poset stands for.
///
/// The poset is cut into the neighborhoods `P^i` of its interior elements and
/// the extremal covers; the `P(1,1,1)` neighborhood goes first and the other
/// pieces are attached greedily, each as soon as it shares an element with
/// what has been built, orienting a lone identified `a` element as `a1`.
pub fn find_contact_sequence_with_map(p: &Poset) -> Result<Option<(ContactSequence, Vec<usize>)>> {
    let h = p.height();
    if h > 2 {
        return Err(Error::HeightBound { height: h, bound: 2 });
    }
    if !p.is_connected() {
        return Err(Error::Disconnected);
    }
    if h < 2 {
        return Ok(None);
    }
    let Some(pieces) = decompose(p)? else {
        return Ok(None);
    };
    let roots: Vec<usize> = (0..pieces.len())
        .filter(|&k| pieces[k].block == BuildingBlock::P111)
        .collect();
    if roots.len() != 1 {
        return Ok(None);
    }
    let root = &pieces[roots[0]];
    let mut q = BuildingBlock::P111.poset();
    // cur label k <-> original element p_of[k - 1]
    let mut p_of: Vec<usize> = vec![root.c, root.m.expect("middle"), root.a[0]];
    let mut steps = vec![GluingStep::initial(BuildingBlock::P111)];
    let mut used = vec![false; pieces.len()];
    used[roots[0]] = true;
    loop {
        let mut progressed = false;
        for (k, piece) in pieces.iter().enumerate() {
            if used[k] {
                continue;
            }
            let cur = |e: usize| p_of.iter().position(|&o| o == e).map(|i| i + 1);
            let mut a = piece.a.clone();
            if a.len() == 2 && cur(a[0]).is_none() && cur(a[1]).is_some() {
                a.swap(0, 1);
            }
            let x = cur(piece.c);
            let y = cur(a[0]);
            let z = a.get(1).and_then(|&e| cur(e));
            if x.is_none() && y.is_none() && z.is_none() {
                continue;
            }
            let Some(rule) = GluingRule::infer(&q, x, y, z) else {
                continue;
            };
            if !rule.is_contact_rule() || !piece.block.rules().contains(&rule) {
                continue;
            }
            let step = GluingStep::new(piece.block, rule, x, y, z);
            let g = apply_gluing(&q, &step)?;
            let mut next = vec![0; g.poset.n()];
            for (old, &new) in g.q_map.iter().enumerate() {
                next[new - 1] = p_of[old];
            }
            let block = piece.block;
            let mut local = vec![(block.c(), piece.c), (block.a1(), a[0])];
            if let (Some(l), Some(&e)) = (block.a2(), a.get(1)) {
                local.push((l, e));
            }
            if let (Some(l), Some(e)) = (block.m(), piece.m) {
                local.push((l, e));
            }
            for (l, e) in local {
                next[g.block_map[l - 1] - 1] = e;
            }
            p_of = next;
            q = g.poset;
            steps.push(step);
            used[k] = true;
            progressed = true;
        }
        if used.iter().all(|&u| u) {
            break;
        }
        if !progressed {
            return Ok(None);
        }
    }
    // the replayed poset must be p itself under p_of
    if q.n() != p.n() || q.relations().iter().any(|&(i, j)| !p.less(p_of[i - 1], p_of[j - 1])) || q.relation_count() != p.relation_count() {
        return Ok(None);
    }
    Ok(Some((ContactSequence::new(steps), p_of)))
}

struct Piece {
    block: BuildingBlock,
    c: usize,
    m: Option<usize>,
    a: Vec<usize>,
}

/// Neighborhoods of interior elements and covers between extremal elements;
/// `None` if some neighborhood is not a building block.
fn decompose(p: &Poset) -> Result<Option<Vec<Piece>>> {
    let ext = p.extremal_data();
    let mut pieces = Vec::new();
    for &i in &ext.interior {
        let nb = p.interior_neighborhood(i)?;
        let below: Vec<usize> = p.down_set(i);
        let above: Vec<usize> = p.up_set(i);
        let piece = match nb.shape {
            (1, 1, 1) => Piece {
                block: BuildingBlock::P111,
                c: below[0],
                m: Some(i),
                a: above,
            },
            (1, 1, 2) => Piece {
                block: BuildingBlock::P112,
                c: below[0],
                m: Some(i),
                a: above,
            },
            (2, 1, 1) => Piece {
                block: BuildingBlock::P211,
                c: above[0],
                m: Some(i),
                a: below,
            },
            _ => return Ok(None),
        };
        pieces.push(piece);
    }
    for &(a, b) in p.covers() {
        if p.is_extremal(a) && p.is_extremal(b) {
            pieces.push(Piece {
                block: BuildingBlock::P11,
                c: a,
                m: None,
                a: vec![b],
            });
        }
    }
    Ok(Some(pieces))
}

/// A contact sequence together with its poset and contact form.
#[derive(Debug, Clone)]
pub struct GeneratedSequence {
    pub sequence: ContactSequence,
    pub poset: Poset,
    pub form: Functional,
}

/// All contact sequences that start with `P(1,1,1)` and use at most
/// `max_gluings` further steps, one per isomorphism class of the pair
/// (poset, support of the contact form).
pub fn enumerate_contact_sequences(max_gluings: usize) -> Vec<GeneratedSequence> {
    struct State {
        steps: Vec<GluingStep>,
        poset: Poset,
        terms: Vec<(usize, usize)>,
    }
    let start = {
        let block = BuildingBlock::P111;
        State {
            steps: vec![GluingStep::initial(block)],
            poset: block.poset(),
            terms: initial_terms(&initial_labels(block)),
        }
    };
    let mut out = Vec::new();
    let mut seen: BTreeMap<CanonicalForm, ()> = BTreeMap::new();
    let mut level = vec![start];
    seen.insert(decorated_form(&level[0].poset, &level[0].terms), ());
    for depth in 0..=max_gluings {
        let mut next = Vec::new();
        for st in &level {
            if depth < max_gluings {
                for block in [BuildingBlock::P11, BuildingBlock::P112, BuildingBlock::P211] {
                    for &rule in GluingRule::CONTACT.iter().filter(|r| block.rules().contains(r)) {
                        for step in valid_steps(&st.poset, block, rule) {
                            let g = apply_gluing(&st.poset, &step).expect("valid step");
                            let mut terms: Vec<(usize, usize)> = st
                                .terms
                                .iter()
                                .map(|&(i, j)| (g.q_map[i - 1], g.q_map[j - 1]))
                                .collect();
                            terms.extend(step_terms(block, rule, &g.labels).expect("contact rule"));
                            let form = decorated_form(&g.poset, &terms);
                            if seen.insert(form, ()).is_some() {
                                continue;
                            }
                            let mut steps = st.steps.clone();
                            steps.push(step);
                            next.push(State {
                                steps,
                                poset: g.poset,
                                terms,
                            });
                        }
                    }
                }
            }
        }
        out.extend(level.drain(..).map(|st| GeneratedSequence {
            sequence: ContactSequence::new(st.steps),
            poset: st.poset,
            form: terms_functional(&st.terms),
        }));
        level = next;
    }
    out
}

fn decorated_form(p: &Poset, terms: &[(usize, usize)]) -> CanonicalForm {
    let n = p.n();
    let mut deco = vec![0u8; n * n];
    for &(i, j) in terms {
        deco[(i - 1) * n + (j - 1)] += 1;
    }
    canonical_labeling(n, p.table(), Some(&deco)).form
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;
    use crate::canon::are_isomorphic;

    fn p111_only() -> ContactSequence {
        ContactSequence::new(vec![GluingStep::initial(BuildingBlock::P111)])
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"steps":[{"block":"P111"},{"block":"P112","rule":"C","c":1}]}"#;
        let seq = ContactSequence::from_json(s).unwrap();
        assert_eq!(seq.steps[1].x, Some(1));
        assert_eq!(seq.to_json(), s);
    }

    #[test]
    fn initial_form() {
        let phi = build_contact_form(&p111_only()).unwrap();
        assert_eq!(phi.terms(), vec![(1, 3, q(1)), (2, 2, q(1)), (2, 3, q(1))]);
    }

    #[test]
    fn f_and_a1_steps_add_documented_terms() {
        // P111 then P112 by C at 1, then P112 by F
        let mut seq = p111_only();
        seq.steps.push(GluingStep::new(BuildingBlock::P112, GluingRule::C, Some(1), None, None));
        let r = seq.replay().unwrap();
        let l = r.labels[1];
        let before = build_contact_form(&seq).unwrap();
        // F needs two maxima related to a minimum: x = c of block 1, a = its maxima
        seq.steps.push(GluingStep::new(BuildingBlock::P112, GluingRule::F, Some(l.x), Some(l.y), Some(l.z.unwrap())));
        let r2 = seq.replay().unwrap();
        let after = build_contact_form(&seq).unwrap();
        let l2 = r2.labels[2];
        // compare after relabeling `before` into the final labels
        let g = apply_gluing(&r.poset, &seq.steps[2]).unwrap();
        let mut expect: Vec<(usize, usize)> = before
            .terms()
            .into_iter()
            .map(|(i, j, _)| (g.q_map[i - 1], g.q_map[j - 1]))
            .collect();
        expect.push((l2.m.unwrap(), l2.z.unwrap()));
        expect.sort();
        let got: Vec<(usize, usize)> = after.terms().into_iter().map(|(i, j, _)| (i, j)).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn p11_by_a1_adds_one_term() {
        let mut seq = p111_only();
        seq.steps.push(GluingStep::new(BuildingBlock::P11, GluingRule::A1, None, Some(3), None));
        let r = seq.replay().unwrap();
        let l = r.labels[1];
        let phi = build_contact_form(&seq).unwrap();
        assert!(phi.terms().iter().any(|&(i, j, _)| (i, j) == (l.x, l.y)));
        assert_eq!(phi.terms().len(), 4);
    }

    #[test]
    fn contact_checks() {
        let mut two = p111_only();
        two.steps.push(GluingStep::new(BuildingBlock::P111, GluingRule::C, Some(1), None, None));
        assert!(matches!(two.check_contact(), Err(Error::InvalidSequence { step: 1, .. })));
        let mut e1 = ContactSequence::new(vec![GluingStep::initial(BuildingBlock::P112)]);
        e1.steps.push(GluingStep::new(BuildingBlock::P111, GluingRule::A1, None, Some(3), None));
        assert!(e1.check_contact().is_ok());
        let bad = ContactSequence::new(vec![GluingStep::new(BuildingBlock::P111, GluingRule::C, Some(1), None, None)]);
        assert!(matches!(bad.replay(), Err(Error::InvalidSequence { step: 0, .. })));
    }

    #[test]
    fn find_round_trip() {
        let mut seq = p111_only();
        seq.steps.push(GluingStep::new(BuildingBlock::P112, GluingRule::C, Some(1), None, None));
        let p = seq.replay().unwrap().poset;
        let (found, map) = find_contact_sequence_with_map(&p).unwrap().unwrap();
        assert_eq!(found.steps.len(), 2);
        let q = found.replay().unwrap().poset;
        assert!(are_isomorphic(&p, &q).unwrap());
        for (i, j) in q.relations() {
            assert!(p.less(map[i - 1], map[j - 1]));
        }
        assert_eq!(
            find_contact_sequence(&Poset::chain(3)).unwrap().unwrap(),
            p111_only()
        );
        // an interior element with three elements above it blocks any sequence
        let p113 = Poset::complete(&[1, 1, 3]).unwrap();
        assert_eq!(find_contact_sequence(&p113).unwrap(), None);
    }

    #[test]
    fn rerooted_form_is_contact() {
        let mut seq = ContactSequence::new(vec![GluingStep::initial(BuildingBlock::P112)]);
        seq.steps.push(GluingStep::new(BuildingBlock::P111, GluingRule::A1, None, Some(3), None));
        let p = seq.replay().unwrap().poset;
        let phi = build_contact_form(&seq).unwrap();
        let g = LieAlgebra::type_a(&p).unwrap();
        assert!(g.extended_matrix(&phi).unwrap().determinant().unwrap() != q(0));
    }

    #[test]
    fn small_enumeration() {
        let all = enumerate_contact_sequences(1);
        assert!(all.len() > 1);
        assert_eq!(all[0].sequence, p111_only());
        for s in &all {
            let g = LieAlgebra::type_a(&s.poset).unwrap();
            assert!(g.extended_matrix(&s.form).unwrap().determinant().unwrap() != q(0));
        }
    }
}
