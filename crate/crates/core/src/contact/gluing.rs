//! Building blocks and the twelve height-two gluing rules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BuildingBlock {
    P11,
    P111,
    P112,
    P211,
}

impl BuildingBlock {
    pub const ALL: [BuildingBlock; 4] = [Self::P11, Self::P111, Self::P112, Self::P211];

    /// The block with its fixed local labels:
    /// `P11 = {1 < 2}`, `P111 = 1 < 2 < 3`, `P112 = 1 < 2 < 3, 4`,
    /// `P211 = 1, 2 < 3 < 4`.
    pub fn poset(self) -> Poset {
        match self {
            Self::P11 => Poset::chain(2),
            Self::P111 => Poset::chain(3),
            Self::P112 => Poset::new(4, &[(1, 2), (2, 3), (2, 4)]).expect("valid"),
            Self::P211 => Poset::new(4, &[(1, 3), (2, 3), (3, 4)]).expect("valid"),
        }
    }

    pub fn size(self) -> usize {
        match self {
            Self::P11 => 2,
            Self::P111 => 3,
            Self::P112 | Self::P211 => 4,
        }
    }

    /// Local label of the distinguished extremal element `c`.
    pub fn c(self) -> usize {
        match self {
            Self::P211 => 4,
            _ => 1,
        }
    }

    pub fn m(self) -> Option<usize> {
        match self {
            Self::P11 => None,
            Self::P111 | Self::P112 => Some(2),
            Self::P211 => Some(3),
        }
    }

    pub fn a1(self) -> usize {
        match self {
            Self::P11 => 2,
            Self::P111 => 3,
            Self::P112 => 3,
            Self::P211 => 1,
        }
    }

    pub fn a2(self) -> Option<usize> {
        match self {
            Self::P112 => Some(4),
            Self::P211 => Some(2),
            _ => None,
        }
    }

    /// Whether `c` is minimal in the block (the `a` elements then are maximal).
    pub fn c_is_minimal(self) -> bool {
        self != Self::P211
    }

    /// Index of `g_A` of the block.
    pub fn index(self) -> usize {
        match self {
            Self::P111 => 1,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::P11 => "P11",
            Self::P111 => "P111",
            Self::P112 => "P112",
            Self::P211 => "P211",
        }
    }

    pub fn rules(self) -> &'static [GluingRule] {
        use GluingRule::*;
        match self {
            Self::P11 | Self::P111 => &[A1, C, D1, E1],
            Self::P112 | Self::P211 => &GluingRule::ALL,
        }
    }
}

impl fmt::Display for BuildingBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuildingBlock {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown block {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GluingRule {
    A1,
    A2,
    B,
    C,
    D1,
    D2,
    E1,
    E2,
    F,
    G1,
    G2,
    H,
}

/// How an `a` element is attached: not identified, or identified with an
/// element related (`Related`) or unrelated (`Unrelated`) to `x`, or
/// identified while `c` is free (`Free`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attach {
    No,
    Free,
    Related,
    Unrelated,
}

impl GluingRule {
    pub const ALL: [GluingRule; 12] = [
        Self::A1,
        Self::A2,
        Self::B,
        Self::C,
        Self::D1,
        Self::D2,
        Self::E1,
        Self::E2,
        Self::F,
        Self::G1,
        Self::G2,
        Self::H,
    ];

    /// Rules allowed in contact sequences.
    pub const CONTACT: [GluingRule; 6] = [Self::A1, Self::A2, Self::C, Self::D1, Self::D2, Self::F];

    /// `(c identified, a1 pattern, a2 pattern)`.
    pub fn pattern(self) -> (bool, Attach, Attach) {
        use Attach::*;
        match self {
            Self::A1 => (false, Free, No),
            Self::A2 => (false, No, Free),
            Self::B => (false, Free, Free),
            Self::C => (true, No, No),
            Self::D1 => (true, Related, No),
            Self::D2 => (true, No, Related),
            Self::E1 => (true, Unrelated, No),
            Self::E2 => (true, No, Unrelated),
            Self::F => (true, Related, Related),
            Self::G1 => (true, Related, Unrelated),
            Self::G2 => (true, Unrelated, Related),
            Self::H => (true, Unrelated, Unrelated),
        }
    }

    /// Extra index beyond `ind g_A(S)`.
    pub fn offset(self) -> usize {
        match self {
            Self::B | Self::E1 | Self::E2 | Self::G1 | Self::G2 => 1,
            Self::H => 2,
            _ => 0,
        }
    }

    pub fn is_contact_rule(self) -> bool {
        Self::CONTACT.contains(&self)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::A1 => "A1",
            Self::A2 => "A2",
            Self::B => "B",
            Self::C => "C",
            Self::D1 => "D1",
            Self::D2 => "D2",
            Self::E1 => "E1",
            Self::E2 => "E2",
            Self::F => "F",
            Self::G1 => "G1",
            Self::G2 => "G2",
            Self::H => "H",
        }
    }

    /// The rule determined by an identification pattern in `q`: `x`, `y`, `z`
    /// are the targets of `c`, `a1`, `a2`. Relatedness is tested in `q`.
    pub fn infer(q: &Poset, x: Option<usize>, y: Option<usize>, z: Option<usize>) -> Option<Self> {
        let att = |t: Option<usize>| match (t, x) {
            (None, _) => Attach::No,
            (Some(_), None) => Attach::Free,
            (Some(t), Some(x)) if q.related(t, x) => Attach::Related,
            (Some(_), Some(_)) => Attach::Unrelated,
        };
        let key = (x.is_some(), att(y), att(z));
        Self::ALL.into_iter().find(|r| r.pattern() == key)
    }
}

impl fmt::Display for GluingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GluingRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown gluing rule {s:?}")))
    }
}

/// `ind g_A(S)` plus the rule's offset.
pub fn index_contribution(block: BuildingBlock, rule: GluingRule) -> Result<usize> {
    if !block.rules().contains(&rule) {
        return Err(Error::RuleBlockMismatch {
            block: block.to_string(),
            rule: rule.to_string(),
        });
    }
    Ok(block.index() + rule.offset())
}

/// Adjoin `block` by `rule`, identifying `c`, `a1`, `a2` with the elements
/// `x`, `y`, `z` of the running poset (present exactly when the rule
/// identifies that element).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GluingStep {
    pub block: BuildingBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<GluingRule>,
    #[serde(default, rename = "c", skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    #[serde(default, rename = "a1", skip_serializing_if = "Option::is_none")]
    pub y: Option<usize>,
    #[serde(default, rename = "a2", skip_serializing_if = "Option::is_none")]
    pub z: Option<usize>,
}

impl GluingStep {
    pub fn initial(block: BuildingBlock) -> Self {
        Self {
            block,
            rule: None,
            x: None,
            y: None,
            z: None,
        }
    }

    pub fn new(block: BuildingBlock, rule: GluingRule, x: Option<usize>, y: Option<usize>, z: Option<usize>) -> Self {
        Self {
            block,
            rule: Some(rule),
            x,
            y,
            z,
        }
    }
}

/// Labels of the adjoined block inside the glued poset: `x` is the image of
/// `c`, `y`/`z` of `a1`/`a2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepLabels {
    pub x: usize,
    pub m: Option<usize>,
    pub y: usize,
    pub z: Option<usize>,
}

impl StepLabels {
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        Self {
            x: f(self.x),
            m: self.m.map(&f),
            y: f(self.y),
            z: self.z.map(&f),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Gluing {
    pub poset: Poset,
    /// `q_map[i - 1]`: new label of element `i` of the old poset.
    pub q_map: Vec<usize>,
    /// `block_map[k - 1]`: new label of local block element `k`.
    pub block_map: Vec<usize>,
    pub labels: StepLabels,
}

/// Glues a block onto `q` after checking polarity and the rule's side
/// conditions in `q`. The union is relabeled naturally.
pub fn apply_gluing(q: &Poset, step: &GluingStep) -> Result<Gluing> {
    let block = step.block;
    let Some(rule) = step.rule else {
        return Err(Error::RulePreconditionViolated("gluing step has no rule".into()));
    };
    if !block.rules().contains(&rule) {
        return Err(Error::RuleBlockMismatch {
            block: block.to_string(),
            rule: rule.to_string(),
        });
    }
    if q.height() > 2 {
        return Err(Error::HeightBound {
            height: q.height(),
            bound: 2,
        });
    }
    if !q.is_connected() {
        return Err(Error::Disconnected);
    }
    let (c_id, a1_pat, a2_pat) = rule.pattern();
    let need = |name: &str, present: bool, wanted: bool| -> Result<()> {
        if present != wanted {
            return Err(Error::RulePreconditionViolated(format!(
                "rule {rule} {} identify {name}",
                if wanted { "must" } else { "does not" }
            )));
        }
        Ok(())
    };
    need("c", step.x.is_some(), c_id)?;
    need("a1", step.y.is_some(), a1_pat != Attach::No)?;
    need("a2", step.z.is_some(), a2_pat != Attach::No)?;

    let c_min = block.c_is_minimal();
    let polarity = |e: usize, want_min: bool, role: &str| -> Result<()> {
        q.check_element(e)?;
        let ok = if want_min { q.is_minimal(e) } else { q.is_maximal(e) };
        if !ok {
            return Err(Error::PolarityMismatch {
                element: e,
                detail: format!(
                    "{role} of {block} is {} but the target is not",
                    if want_min { "minimal" } else { "maximal" }
                ),
            });
        }
        Ok(())
    };
    if let Some(x) = step.x {
        polarity(x, c_min, "c")?;
    }
    if let Some(y) = step.y {
        polarity(y, !c_min, "a1")?;
    }
    if let Some(z) = step.z {
        polarity(z, !c_min, "a2")?;
    }
    if step.y.is_some() && step.y == step.z {
        return Err(Error::RulePreconditionViolated("a1 and a2 need distinct targets".into()));
    }
    let side = |t: Option<usize>, pat: Attach, role: &str| -> Result<()> {
        let (Some(t), Some(x)) = (t, step.x) else {
            return Ok(());
        };
        let related = q.related(t, x);
        let want = match pat {
            Attach::Related => true,
            Attach::Unrelated => false,
            _ => return Ok(()),
        };
        if related != want {
            return Err(Error::RulePreconditionViolated(format!(
                "rule {rule} needs {role}={t} {} x={x}",
                if want { "related to" } else { "unrelated to" }
            )));
        }
        Ok(())
    };
    side(step.y, a1_pat, "a1")?;
    side(step.z, a2_pat, "a2")?;

    // union: old elements 0..nq, then the block's unidentified elements
    let nq = q.n();
    let s = block.poset();
    let mut local_to_union = vec![usize::MAX; s.n()];
    let ident = [(block.c(), step.x), (block.a1(), step.y)]
        .into_iter()
        .chain(block.a2().map(|a| (a, step.z)));
    for (local, target) in ident {
        if let Some(t) = target {
            local_to_union[local - 1] = t - 1;
        }
    }
    let mut total = nq;
    for slot in local_to_union.iter_mut() {
        if *slot == usize::MAX {
            *slot = total;
            total += 1;
        }
    }
    let mut less = vec![false; total * total];
    for (i, j) in q.relations() {
        less[(i - 1) * total + (j - 1)] = true;
    }
    for (i, j) in s.relations() {
        less[local_to_union[i - 1] * total + local_to_union[j - 1]] = true;
    }
    let (poset, new_label) = Poset::from_table_relabeled(total, &less);
    let q_map: Vec<usize> = (0..nq).map(|i| new_label[i]).collect();
    let block_map: Vec<usize> = local_to_union.iter().map(|&u| new_label[u]).collect();
    let lab = |local: usize| block_map[local - 1];
    let labels = StepLabels {
        x: lab(block.c()),
        m: block.m().map(lab),
        y: lab(block.a1()),
        z: block.a2().map(lab),
    };
    Ok(Gluing {
        poset,
        q_map,
        block_map,
        labels,
    })
}

/// Every admissible identification of `block` by `rule` into `q`.
pub fn valid_steps(q: &Poset, block: BuildingBlock, rule: GluingRule) -> Vec<GluingStep> {
    if !block.rules().contains(&rule) {
        return Vec::new();
    }
    let c_min = block.c_is_minimal();
    let pick = |want_min: bool| -> Vec<usize> {
        q.elements()
            .filter(|&e| if want_min { q.is_minimal(e) } else { q.is_maximal(e) })
            .collect()
    };
    let xs = pick(c_min);
    let ys = pick(!c_min);
    let (c_id, a1, a2) = rule.pattern();
    let opt = |flag: bool, pool: &[usize]| -> Vec<Option<usize>> {
        if flag {
            pool.iter().map(|&e| Some(e)).collect()
        } else {
            vec![None]
        }
    };
    let fits = |t: Option<usize>, pat: Attach, x: Option<usize>| match (pat, t, x) {
        (Attach::Related, Some(t), Some(x)) => q.related(t, x),
        (Attach::Unrelated, Some(t), Some(x)) => !q.related(t, x),
        _ => true,
    };
    let mut out = Vec::new();
    for x in opt(c_id, &xs) {
        for y in opt(a1 != Attach::No, &ys) {
            for z in opt(a2 != Attach::No, &ys) {
                if y.is_some() && y == z {
                    continue;
                }
                if fits(y, a1, x) && fits(z, a2, x) {
                    out.push(GluingStep::new(block, rule, x, y, z));
                }
            }
        }
    }
    out
}
