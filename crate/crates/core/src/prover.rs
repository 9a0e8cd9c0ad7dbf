//! A decision procedure for GL by backward sequent search.
//!
//! Sequents are pairs of formula sets (contraction is implicit). The
//! classical rules for `∧` and `¬` are invertible and applied first; once a
//! sequent is saturated the modal rule
//!
//! ```text
//!   □Γ, Γ, □A ⇒ A
//! ------------------ GLR
//!   Σ, □Γ ⇒ □A, Θ
//! ```
//!
//! is tried for each boxed succedent. The boxed part of the antecedent grows
//! strictly along every GLR step, so search terminates; sequents are memoized.
//! Failed searches are turned into finite irreflexive transitive
//! countermodels.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{iterate, Formula, Modality};
use crate::kripke::{classify_frame, frame_valid, Frame, KripkeError, Model, ValidityLimits};
use crate::worldset::{WorldSet, MAX_WORLDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("search inconclusive after {nodes} sequents")]
    Inconclusive { nodes: u64 },
    #[error("countermodel needs {0} worlds, more than the supported {MAX_WORLDS}")]
    CountermodelTooLarge(usize),
    #[error("frame {0} is not transitive and acyclic")]
    NotLocallyFinite(usize),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProverLimits {
    /// Distinct sequents examined before giving up.
    pub max_nodes: u64,
}

impl Default for ProverLimits {
    fn default() -> Self {
        ProverLimits {
            max_nodes: 2_000_000,
        }
    }
}

/// `Γ ⇒ Δ`, read as `⋀Γ ⊃ ⋁Δ`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub antecedent: BTreeSet<Formula>,
    pub succedent: BTreeSet<Formula>,
}

impl Sequent {
    /// `⇒ φ`
    pub fn goal(phi: &Formula) -> Sequent {
        Sequent {
            antecedent: BTreeSet::new(),
            succedent: BTreeSet::from([phi.clone()]),
        }
    }

    fn is_initial(&self) -> Option<Rule> {
        if self.succedent.contains(&Formula::Top) {
            return Some(Rule::TopR);
        }
        self.antecedent
            .intersection(&self.succedent)
            .next()
            .map(|f| Rule::Id(f.clone()))
    }

    /// The first invertible rule instance that applies, with its premises.
    fn invertible_step(&self) -> Option<(Rule, Vec<Sequent>)> {
        for f in &self.antecedent {
            match f {
                Formula::And(a, b) => {
                    let mut s = self.clone();
                    s.antecedent.remove(f);
                    s.antecedent.insert((**a).clone());
                    s.antecedent.insert((**b).clone());
                    return Some((Rule::AndL(f.clone()), vec![s]));
                }
                Formula::Not(a) => {
                    let mut s = self.clone();
                    s.antecedent.remove(f);
                    s.succedent.insert((**a).clone());
                    return Some((Rule::NotL(f.clone()), vec![s]));
                }
                _ => {}
            }
        }
        for f in &self.succedent {
            match f {
                Formula::And(a, b) => {
                    let mut left = self.clone();
                    left.succedent.remove(f);
                    let mut right = left.clone();
                    left.succedent.insert((**a).clone());
                    right.succedent.insert((**b).clone());
                    return Some((Rule::AndR(f.clone()), vec![left, right]));
                }
                Formula::Not(a) => {
                    let mut s = self.clone();
                    s.succedent.remove(f);
                    s.antecedent.insert((**a).clone());
                    return Some((Rule::NotR(f.clone()), vec![s]));
                }
                _ => {}
            }
        }
        None
    }

    fn boxed_succedents(&self) -> impl Iterator<Item = &Formula> {
        self.succedent
            .iter()
            .filter(|f| matches!(f, Formula::Box(_)))
    }

    /// Premise of GLR for the boxed succedent `boxed_goal = □A`.
    fn glr_premise(&self, boxed_goal: &Formula) -> Sequent {
        let Formula::Box(a) = boxed_goal else {
            panic!("GLR needs a boxed formula")
        };
        let mut antecedent = BTreeSet::new();
        for f in &self.antecedent {
            if let Formula::Box(b) = f {
                antecedent.insert(f.clone());
                antecedent.insert((**b).clone());
            }
        }
        antecedent.insert(boxed_goal.clone());
        Sequent {
            antecedent,
            succedent: BTreeSet::from([(**a).clone()]),
        }
    }
}

fn join_formulas(f: &mut fmt::Formatter<'_>, set: &BTreeSet<Formula>) -> fmt::Result {
    for (i, phi) in set.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{phi}")?;
    }
    Ok(())
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join_formulas(f, &self.antecedent)?;
        if self.antecedent.is_empty() {
            write!(f, "=> ")?;
        } else {
            write!(f, " => ")?;
        }
        join_formulas(f, &self.succedent)
    }
}

/// A rule instance, carrying its principal formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "principal", rename_all = "snake_case")]
pub enum Rule {
    Id(Formula),
    TopR,
    AndL(Formula),
    AndR(Formula),
    NotL(Formula),
    NotR(Formula),
    Glr(Formula),
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Id(_) => "id",
            Rule::TopR => "T-R",
            Rule::AndL(_) => "&-L",
            Rule::AndR(_) => "&-R",
            Rule::NotL(_) => "~-L",
            Rule::NotR(_) => "~-R",
            Rule::Glr(_) => "GLR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTree {
    pub root: Sequent,
    pub rule: Rule,
    pub children: Vec<ProofTree>,
}

impl ProofTree {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(ProofTree::height)
            .max()
            .unwrap_or(0)
    }

    /// One line per node, children indented under their conclusion.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0);
        out
    }

    fn render_into(&self, out: &mut String, depth: usize) {
        out.push_str(&format!(
            "{}{}   [{}]\n",
            "  ".repeat(depth),
            self.root,
            self.rule.name()
        ));
        for child in &self.children {
            child.render_into(out, depth + 1);
        }
    }
}

/// A rooted finite irreflexive transitive model refuting a formula at `world`.
#[derive(Debug, Clone)]
pub struct Countermodel {
    pub model: Model,
    pub world: usize,
}

impl Countermodel {
    /// `phi` fails at `world` and the frame is finite, irreflexive and transitive.
    pub fn verify(&self, phi: &Formula) -> bool {
        let class = classify_frame(&self.model.frame);
        class.in_fi() && self.model.satisfies(self.world, phi) == Ok(false)
    }
}

#[derive(Debug, Clone)]
pub enum ProverOutcome {
    Proof(ProofTree),
    Countermodel(Countermodel),
}

impl ProverOutcome {
    pub fn is_proof(&self) -> bool {
        matches!(self, ProverOutcome::Proof(_))
    }
}

/// A reusable search engine; the memo table persists across queries.
pub struct Prover {
    limits: ProverLimits,
    memo: HashMap<Sequent, bool>,
    nodes: u64,
}

impl Prover {
    pub fn new(limits: ProverLimits) -> Prover {
        Prover {
            limits,
            memo: HashMap::new(),
            nodes: 0,
        }
    }

    /// Distinct sequents examined so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn valid(&mut self, phi: &Formula) -> Result<bool, ProverError> {
        self.provable(&Sequent::goal(phi))
    }

    pub fn prove(&mut self, phi: &Formula) -> Result<ProverOutcome, ProverError> {
        let goal = Sequent::goal(phi);
        if self.provable(&goal)? {
            Ok(ProverOutcome::Proof(self.build_proof(&goal)))
        } else {
            let mut builder = CountermodelBuilder::default();
            let root = builder.world_for(self, &goal);
            Ok(ProverOutcome::Countermodel(builder.finish(phi, root)?))
        }
    }

    fn provable(&mut self, s: &Sequent) -> Result<bool, ProverError> {
        if let Some(&known) = self.memo.get(s) {
            return Ok(known);
        }
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(ProverError::Inconclusive { nodes: self.nodes });
        }
        let result = if s.is_initial().is_some() {
            true
        } else if let Some((_, premises)) = s.invertible_step() {
            let mut all = true;
            for p in &premises {
                if !self.provable(p)? {
                    all = false;
                    break;
                }
            }
            all
        } else {
            let goals: Vec<Formula> = s.boxed_succedents().cloned().collect();
            let mut any = false;
            for g in &goals {
                if self.provable(&s.glr_premise(g))? {
                    any = true;
                    break;
                }
            }
            any
        };
        self.memo.insert(s.clone(), result);
        Ok(result)
    }

    fn known(&self, s: &Sequent) -> bool {
        *self.memo.get(s).expect("sequent decided during search")
    }

    fn build_proof(&self, s: &Sequent) -> ProofTree {
        if let Some(rule) = s.is_initial() {
            return ProofTree {
                root: s.clone(),
                rule,
                children: Vec::new(),
            };
        }
        if let Some((rule, premises)) = s.invertible_step() {
            return ProofTree {
                root: s.clone(),
                rule,
                children: premises.iter().map(|p| self.build_proof(p)).collect(),
            };
        }
        let goal = s
            .boxed_succedents()
            .find(|g| self.memo.get(&s.glr_premise(g)) == Some(&true))
            .expect("provable saturated sequent has a provable GLR premise")
            .clone();
        ProofTree {
            root: s.clone(),
            rule: Rule::Glr(goal.clone()),
            children: vec![self.build_proof(&s.glr_premise(&goal))],
        }
    }
}

/// Builds a countermodel as a DAG of saturated sequents, one world each.
#[derive(Default)]
struct CountermodelBuilder {
    worlds: HashMap<Sequent, usize>,
    atoms: Vec<BTreeSet<String>>,
    edges: Vec<(usize, usize)>,
}

impl CountermodelBuilder {
    /// A world refuting the unprovable sequent `s`.
    fn world_for(&mut self, prover: &mut Prover, s: &Sequent) -> usize {
        if let Some((_, premises)) = s.invertible_step() {
            let failing = premises
                .iter()
                .find(|p| !prover.known(p))
                .expect("an unprovable sequent has an unprovable premise");
            return self.world_for(prover, failing);
        }
        if let Some(&w) = self.worlds.get(s) {
            return w;
        }
        let w = self.atoms.len();
        self.worlds.insert(s.clone(), w);
        self.atoms.push(
            s.antecedent
                .iter()
                .filter_map(|f| match f {
                    Formula::Var(v) => Some(v.clone()),
                    _ => None,
                })
                .collect(),
        );
        let goals: Vec<Formula> = s.boxed_succedents().cloned().collect();
        for g in goals {
            let child = self.world_for(prover, &s.glr_premise(&g));
            self.edges.push((w, child));
        }
        w
    }

    fn finish(self, phi: &Formula, root: usize) -> Result<Countermodel, ProverError> {
        let n = self.atoms.len();
        if n > MAX_WORLDS {
            return Err(ProverError::CountermodelTooLarge(n));
        }
        let names = (0..n).map(|i| format!("w{i}")).collect();
        let frame = Frame::new(names, self.edges)?.transitive_closure();
        let mut valuation: BTreeMap<String, WorldSet> = phi
            .vars()
            .into_iter()
            .map(|v| (v, WorldSet::EMPTY))
            .collect();
        for (w, atoms) in self.atoms.iter().enumerate() {
            for v in atoms {
                valuation.entry(v.clone()).or_default().insert(w);
            }
        }
        Ok(Countermodel {
            model: Model::new(frame, valuation)?,
            world: root,
        })
    }
}

/// Proof or countermodel for `phi`.
pub fn prove_gl(phi: &Formula, limits: &ProverLimits) -> Result<ProverOutcome, ProverError> {
    Prover::new(*limits).prove(phi)
}

/// `phi ∈ GL`.
pub fn valid_gl(phi: &Formula, limits: &ProverLimits) -> Result<bool, ProverError> {
    Prover::new(*limits).valid(phi)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {rule} step at `{sequent}`: {reason}")]
pub struct ProofCheckError {
    pub rule: String,
    pub sequent: String,
    pub reason: String,
}

/// Replays every rule instance of `tree` and checks its root is `⇒ phi`.
pub fn check_proof(tree: &ProofTree, phi: &Formula) -> Result<(), ProofCheckError> {
    if tree.root != Sequent::goal(phi) {
        return Err(ProofCheckError {
            rule: tree.rule.name().into(),
            sequent: tree.root.to_string(),
            reason: format!("root is not `=> {phi}`"),
        });
    }
    check_node(tree)
}

fn check_node(tree: &ProofTree) -> Result<(), ProofCheckError> {
    let s = &tree.root;
    let fail = |reason: &str| ProofCheckError {
        rule: tree.rule.name().into(),
        sequent: s.to_string(),
        reason: reason.into(),
    };
    let expect_children = |expected: Vec<Sequent>| -> Result<(), ProofCheckError> {
        let got: Vec<&Sequent> = tree.children.iter().map(|c| &c.root).collect();
        if got.len() != expected.len() || got.iter().zip(&expected).any(|(g, e)| *g != e) {
            return Err(fail("premises do not match the rule schema"));
        }
        Ok(())
    };
    match &tree.rule {
        Rule::Id(f) => {
            if !(s.antecedent.contains(f) && s.succedent.contains(f)) {
                return Err(fail("formula not on both sides"));
            }
            expect_children(Vec::new())?;
        }
        Rule::TopR => {
            if !s.succedent.contains(&Formula::Top) {
                return Err(fail("T not in succedent"));
            }
            expect_children(Vec::new())?;
        }
        Rule::AndL(f) => {
            let Formula::And(a, b) = f else {
                return Err(fail("principal formula is not a conjunction"));
            };
            if !s.antecedent.contains(f) {
                return Err(fail("principal formula not in antecedent"));
            }
            let mut p = s.clone();
            p.antecedent.remove(f);
            p.antecedent.insert((**a).clone());
            p.antecedent.insert((**b).clone());
            expect_children(vec![p])?;
        }
        Rule::AndR(f) => {
            let Formula::And(a, b) = f else {
                return Err(fail("principal formula is not a conjunction"));
            };
            if !s.succedent.contains(f) {
                return Err(fail("principal formula not in succedent"));
            }
            let mut l = s.clone();
            l.succedent.remove(f);
            let mut r = l.clone();
            l.succedent.insert((**a).clone());
            r.succedent.insert((**b).clone());
            expect_children(vec![l, r])?;
        }
        Rule::NotL(f) => {
            let Formula::Not(a) = f else {
                return Err(fail("principal formula is not a negation"));
            };
            if !s.antecedent.contains(f) {
                return Err(fail("principal formula not in antecedent"));
            }
            let mut p = s.clone();
            p.antecedent.remove(f);
            p.succedent.insert((**a).clone());
            expect_children(vec![p])?;
        }
        Rule::NotR(f) => {
            let Formula::Not(a) = f else {
                return Err(fail("principal formula is not a negation"));
            };
            if !s.succedent.contains(f) {
                return Err(fail("principal formula not in succedent"));
            }
            let mut p = s.clone();
            p.succedent.remove(f);
            p.antecedent.insert((**a).clone());
            expect_children(vec![p])?;
        }
        Rule::Glr(f) => {
            if !matches!(f, Formula::Box(_)) {
                return Err(fail("principal formula is not boxed"));
            }
            if !s.succedent.contains(f) {
                return Err(fail("principal formula not in succedent"));
            }
            expect_children(vec![s.glr_premise(f)])?;
        }
    }
    tree.children.iter().try_for_each(check_node)
}

/// Bounded run of the rule "from `φ ⊃ ◊ⁿ⊤` for all `n`, infer `φ ⊃ ⊥`".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoncompactReport {
    pub phi: Formula,
    pub n_max: usize,
    /// `premises[n]` is the GL-validity of `φ ⊃ ◊ⁿ⊤`.
    pub premises: Vec<bool>,
    pub all_premises_hold: bool,
    pub conclusion: bool,
    /// All premises up to `n_max` hold exactly when the conclusion does.
    pub agree: bool,
}

pub fn noncompact_drive(
    phi: &Formula,
    n_max: usize,
    limits: &ProverLimits,
) -> Result<NoncompactReport, ProverError> {
    let mut prover = Prover::new(*limits);
    let premises = (0..=n_max)
        .map(|n| {
            prover.valid(
                &phi.clone()
                    .implies(iterate(Modality::Diamond, n, Formula::Top)),
            )
        })
        .collect::<Result<Vec<bool>, ProverError>>()?;
    let conclusion = prover.valid(&phi.clone().implies(Formula::bot()))?;
    let all_premises_hold = premises.iter().all(|&b| b);
    Ok(NoncompactReport {
        phi: phi.clone(),
        n_max,
        premises,
        all_premises_hold,
        conclusion,
        agree: all_premises_hold == conclusion,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeStatus {
    /// `phi` is not GL-valid, so there is nothing to check.
    Skipped,
    Checked,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoundnessReport {
    pub status: ProbeStatus,
    pub frames_checked: usize,
    /// Indices of frames on which a GL-valid `phi` failed.
    pub violations: Vec<usize>,
}

impl SoundnessReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// If `phi ∈ GL`, checks `F ⊨ phi` on every frame (all transitive and acyclic).
pub fn soundness_probe(
    phi: &Formula,
    frames: &[Frame],
    limits: &ProverLimits,
    validity: &ValidityLimits,
) -> Result<SoundnessReport, ProverError> {
    for (i, f) in frames.iter().enumerate() {
        if !classify_frame(f).in_lf() {
            return Err(ProverError::NotLocallyFinite(i));
        }
    }
    if !valid_gl(phi, limits)? {
        return Ok(SoundnessReport {
            status: ProbeStatus::Skipped,
            frames_checked: 0,
            violations: Vec::new(),
        });
    }
    let mut violations = Vec::new();
    for (i, f) in frames.iter().enumerate() {
        if !frame_valid(f, phi, validity)? {
            violations.push(i);
        }
    }
    Ok(SoundnessReport {
        status: ProbeStatus::Checked,
        frames_checked: frames.len(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::kripke::make_chain_desc;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn limits() -> ProverLimits {
        ProverLimits::default()
    }

    #[test]
    fn proves_axioms() {
        for phi in [
            Formula::axiom_k("p", "q"),
            Formula::axiom_4("p"),
            Formula::loeb("p"),
        ] {
            let ProverOutcome::Proof(tree) = prove_gl(&phi, &limits()).unwrap() else {
                panic!("{phi} should be provable");
            };
            check_proof(&tree, &phi).unwrap();
        }
    }

    #[test]
    fn p_implies_box_p_has_two_world_countermodel() {
        let phi = f("p -> []p");
        let ProverOutcome::Countermodel(cm) = prove_gl(&phi, &limits()).unwrap() else {
            panic!("p -> []p is not GL-valid");
        };
        assert!(cm.verify(&phi));
        let frame = &cm.model.frame;
        assert_eq!(frame.len(), 2);
        assert_eq!(
            frame.edges().collect::<Vec<_>>(),
            vec![(cm.world, 1 - cm.world)]
        );
        assert_eq!(cm.model.value_of("p"), WorldSet::singleton(cm.world));
    }

    #[test]
    fn valid_gl_examples() {
        assert!(valid_gl(&Formula::Top, &limits()).unwrap());
        assert!(valid_gl(&f("[]F -> []p"), &limits()).unwrap());
        assert!(!valid_gl(&f("<>T"), &limits()).unwrap());
        assert!(!valid_gl(&f("[]p -> p"), &limits()).unwrap());
        // Consistency does not prove its own consistency, and is not provable.
        assert!(valid_gl(&f("[]([]F -> F) -> []F"), &limits()).unwrap());
        assert!(valid_gl(&f("~[]F -> ~[]~[]F"), &limits()).unwrap());
        assert!(!valid_gl(&f("~[]F -> []~[]F"), &limits()).unwrap());
    }

    #[test]
    fn diamond_top_refuted_by_one_world() {
        let phi = f("<>T");
        let ProverOutcome::Countermodel(cm) = prove_gl(&phi, &limits()).unwrap() else {
            panic!();
        };
        assert_eq!(cm.model.frame.len(), 1);
        assert!(cm.verify(&phi));
    }

    #[test]
    fn checker_rejects_tampered_trees() {
        let phi = Formula::loeb("p");
        let ProverOutcome::Proof(mut tree) = prove_gl(&phi, &limits()).unwrap() else {
            panic!();
        };
        assert!(check_proof(&tree, &f("p")).is_err());
        let mut leaf = &mut tree;
        while !leaf.children.is_empty() {
            leaf = &mut leaf.children[0];
        }
        leaf.rule = Rule::Id(f("zz"));
        assert!(check_proof(&tree, &phi).is_err());
    }

    #[test]
    fn inconclusive_when_budget_exhausted() {
        let tiny = ProverLimits { max_nodes: 2 };
        assert!(matches!(
            valid_gl(&Formula::loeb("p"), &tiny),
            Err(ProverError::Inconclusive { .. })
        ));
    }

    #[test]
    fn noncompact_examples() {
        let r = noncompact_drive(&Formula::bot(), 4, &limits()).unwrap();
        assert!(r.all_premises_hold && r.conclusion && r.agree);

        let neg_loeb = Formula::loeb("p").not();
        let r = noncompact_drive(&neg_loeb, 5, &limits()).unwrap();
        assert!(r.all_premises_hold && r.conclusion && r.agree);

        let r = noncompact_drive(&f("p"), 3, &limits()).unwrap();
        assert_eq!(r.premises, vec![true, false, false, false]);
        assert!(!r.conclusion && r.agree);
    }

    #[test]
    fn soundness_probe_examples() {
        let frames: Vec<Frame> = (1..=4).map(|n| make_chain_desc(n).unwrap()).collect();
        let v = ValidityLimits::default();
        let r = soundness_probe(&Formula::loeb("p"), &frames, &limits(), &v).unwrap();
        assert_eq!((r.status, r.frames_checked), (ProbeStatus::Checked, 4));
        assert!(r.holds());
        let r = soundness_probe(&f("<>T"), &frames, &limits(), &v).unwrap();
        assert_eq!(r.status, ProbeStatus::Skipped);
        let reflexive = Frame::numbered(1, [(0, 0)]).unwrap();
        assert!(matches!(
            soundness_probe(&Formula::loeb("p"), &[reflexive], &limits(), &v),
            Err(ProverError::NotLocallyFinite(0))
        ));
    }

    #[test]
    fn sequent_display() {
        let s = Sequent {
            antecedent: BTreeSet::from([f("p"), f("[]q")]),
            succedent: BTreeSet::from([f("q")]),
        };
        assert_eq!(s.to_string(), "p, []q => q");
        assert_eq!(Sequent::goal(&f("p")).to_string(), "=> p");
    }
}
