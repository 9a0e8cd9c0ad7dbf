//! Finite Kripke frames and models.
//!
//! Worlds are dense indices `0..len`; each frame also carries a display name
//! per world for the file format and reports.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;
use crate::worldset::{WorldSet, MAX_WORLDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("a frame needs at least one world")]
    EmptyFrame,
    #[error("frame has {0} worlds; at most {MAX_WORLDS} are supported")]
    TooManyWorlds(usize),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("world index {0} out of range")]
    WorldOutOfRange(usize),
    #[error("valuation of `{0}` mentions worlds outside the frame")]
    ValuationOutOfRange(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("malformed frame file: {0}")]
    Format(String),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    names: Vec<String>,
    succ: Vec<WorldSet>,
}

/// On-disk representation: `{"worlds": [...], "edges": [[from, to], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub worlds: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl Frame {
    /// A frame over `names` with edges given by index pairs.
    pub fn new(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Frame, KripkeError> {
        if names.is_empty() {
            return Err(KripkeError::EmptyFrame);
        }
        if names.len() > MAX_WORLDS {
            return Err(KripkeError::TooManyWorlds(names.len()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(KripkeError::DuplicateWorld(n.clone()));
            }
        }
        let mut succ = vec![WorldSet::EMPTY; names.len()];
        for (a, b) in edges {
            for w in [a, b] {
                if w >= names.len() {
                    return Err(KripkeError::WorldOutOfRange(w));
                }
            }
            succ[a].insert(b);
        }
        Ok(Frame { names, succ })
    }

    /// A frame whose worlds are named `0`, `1`, … `n-1`.
    pub fn numbered(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Frame, KripkeError> {
        Frame::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    /// Builds a frame directly from successor sets; used by enumerators.
    pub(crate) fn from_successors(succ: Vec<WorldSet>) -> Frame {
        let names = (0..succ.len()).map(|i| i.to_string()).collect();
        Frame { names, succ }
    }

    pub fn from_file(file: &FrameFile) -> Result<Frame, KripkeError> {
        let index: HashMap<&str, usize> = file
            .worlds
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut edges = Vec::with_capacity(file.edges.len());
        for [a, b] in &file.edges {
            let ia = *index
                .get(a.as_str())
                .ok_or_else(|| KripkeError::UnknownWorld(a.clone()))?;
            let ib = *index
                .get(b.as_str())
                .ok_or_else(|| KripkeError::UnknownWorld(b.clone()))?;
            edges.push((ia, ib));
        }
        Frame::new(file.worlds.clone(), edges)
    }

    pub fn from_json(text: &str) -> Result<Frame, KripkeError> {
        let file: FrameFile =
            serde_json::from_str(text).map_err(|e| KripkeError::Format(e.to_string()))?;
        Frame::from_file(&file)
    }

    pub fn to_file(&self) -> FrameFile {
        FrameFile {
            worlds: self.names.clone(),
            edges: self
                .edges()
                .map(|(a, b)| [self.names[a].clone(), self.names[b].clone()])
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("frame file serializes")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn worlds(&self) -> WorldSet {
        WorldSet::full(self.len())
    }

    pub fn check_world(&self, w: usize) -> Result<(), KripkeError> {
        if w < self.len() {
            Ok(())
        } else {
            Err(KripkeError::WorldOutOfRange(w))
        }
    }

    pub fn successors(&self, w: usize) -> WorldSet {
        self.succ[w]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ[a].contains(b)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(|s| s.len()).sum()
    }

    /// `R⁻¹[X]`: worlds with at least one successor in `x`.
    pub fn preimage(&self, x: WorldSet) -> WorldSet {
        self.succ
            .iter()
            .enumerate()
            .filter(|(_, s)| s.intersects(x))
            .map(|(w, _)| w)
            .collect()
    }

    /// Worlds all of whose successors lie in `x`.
    pub fn box_set(&self, x: WorldSet) -> WorldSet {
        self.succ
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_subset(x))
            .map(|(w, _)| w)
            .collect()
    }

    /// Strict reachability `R⁺[w]` for every world.
    pub fn reach_plus(&self) -> Vec<WorldSet> {
        let mut reach = self.succ.clone();
        // Warshall on bit rows.
        for k in 0..self.len() {
            for i in 0..self.len() {
                if reach[i].contains(k) {
                    reach[i] = reach[i].union(reach[k]);
                }
            }
        }
        reach
    }

    pub fn transitive_closure(&self) -> Frame {
        Frame {
            names: self.names.clone(),
            succ: self.reach_plus(),
        }
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.len()).all(|a| {
            self.succ[a]
                .iter()
                .all(|b| self.succ[b].is_subset(self.succ[a]))
        })
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.len()).all(|w| !self.succ[w].contains(w))
    }

    pub fn is_acyclic(&self) -> bool {
        self.reach_plus()
            .iter()
            .enumerate()
            .all(|(w, r)| !r.contains(w))
    }

    /// The subframe generated by `w`: `{w} ∪ R⁺[w]`, reindexed.
    ///
    /// Returns the subframe, the new index of `w`, and for each new index the
    /// original world. Worlds are ordered by ascending height and then by
    /// original index, so isomorphic cones of chains get identical encodings.
    pub fn generated_subframe(&self, w: usize) -> (Frame, usize, Vec<usize>) {
        let reach = self.reach_plus();
        let heights = heights_from_reach(self, &reach);
        let mut cone: Vec<usize> = reach[w].union(WorldSet::singleton(w)).iter().collect();
        cone.sort_by_key(|&u| (heights[u], u));
        let mut new_index = vec![usize::MAX; self.len()];
        for (i, &u) in cone.iter().enumerate() {
            new_index[u] = i;
        }
        let succ = cone
            .iter()
            .map(|&u| self.succ[u].iter().map(|v| new_index[v]).collect())
            .collect();
        let names = cone.iter().map(|&u| self.names[u].clone()).collect();
        (Frame { names, succ }, new_index[w], cone)
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self
            .edges()
            .map(|(a, b)| format!("{}->{}", self.names[a], self.names[b]))
            .collect();
        write!(f, "Frame{{worlds: {:?}, edges: {:?}}}", self.names, edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub frame: Frame,
    valuation: BTreeMap<String, WorldSet>,
}

impl Model {
    pub fn new(frame: Frame, valuation: BTreeMap<String, WorldSet>) -> Result<Model, KripkeError> {
        for (var, set) in &valuation {
            if !set.is_subset(frame.worlds()) {
                return Err(KripkeError::ValuationOutOfRange(var.clone()));
            }
        }
        Ok(Model { frame, valuation })
    }

    pub fn valuation(&self) -> &BTreeMap<String, WorldSet> {
        &self.valuation
    }

    /// `v(p)`, with unlisted variables read as the empty set.
    pub fn value_of(&self, var: &str) -> WorldSet {
        self.valuation.get(var).copied().unwrap_or_default()
    }

    /// `M, w ⊨ φ`, evaluated clause by clause.
    pub fn satisfies(&self, w: usize, phi: &Formula) -> Result<bool, KripkeError> {
        self.frame.check_world(w)?;
        Ok(self.holds_at(w, phi))
    }

    fn holds_at(&self, w: usize, phi: &Formula) -> bool {
        match phi {
            Formula::Top => true,
            Formula::Var(p) => self.value_of(p).contains(w),
            Formula::And(a, b) => self.holds_at(w, a) && self.holds_at(w, b),
            Formula::Not(a) => !self.holds_at(w, a),
            Formula::Box(a) => self.frame.successors(w).iter().all(|u| self.holds_at(u, a)),
        }
    }

    /// The set of worlds where `phi` holds.
    pub fn truth_set(&self, phi: &Formula) -> WorldSet {
        match phi {
            Formula::Top => self.frame.worlds(),
            Formula::Var(p) => self.value_of(p),
            Formula::And(a, b) => self.truth_set(a).intersection(self.truth_set(b)),
            Formula::Not(a) => self.frame.worlds().difference(self.truth_set(a)),
            Formula::Box(a) => self.frame.box_set(self.truth_set(a)),
        }
    }

    /// `M ⊨ φ`
    pub fn model_true(&self, phi: &Formula) -> bool {
        (0..self.frame.len()).all(|w| self.holds_at(w, phi))
    }
}

/// A natural number or `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtNat {
    Finite(usize),
    Infinite,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinite => write!(f, "inf"),
        }
    }
}

fn heights_from_reach(frame: &Frame, reach: &[WorldSet]) -> Vec<ExtNat> {
    let n = frame.len();
    let on_cycle: WorldSet = (0..n).filter(|&w| reach[w].contains(w)).collect();
    let mut memo: Vec<Option<ExtNat>> = vec![None; n];
    // Worlds that can reach a cycle have unbounded paths.
    for w in 0..n {
        if on_cycle.contains(w) || reach[w].intersects(on_cycle) {
            memo[w] = Some(ExtNat::Infinite);
        }
    }
    // The remaining worlds form a DAG; finish them in order of reach-set size,
    // which puts every successor before its predecessors.
    let mut order: Vec<usize> = (0..n).filter(|&w| memo[w].is_none()).collect();
    order.sort_by_key(|&w| reach[w].len());
    for w in order {
        let h = frame
            .successors(w)
            .iter()
            .map(|u| match memo[u] {
                Some(ExtNat::Finite(k)) => k + 1,
                _ => unreachable!("successor of an acyclic world is acyclic and finished"),
            })
            .max()
            .unwrap_or(0);
        memo[w] = Some(ExtNat::Finite(h));
    }
    memo.into_iter()
        .map(|h| h.expect("every world assigned"))
        .collect()
}

/// Height of every world: the supremum of the number of `R`-steps along
/// paths starting there.
pub fn heights(frame: &Frame) -> Vec<ExtNat> {
    heights_from_reach(frame, &frame.reach_plus())
}

pub fn height(frame: &Frame, w: usize) -> Result<ExtNat, KripkeError> {
    frame.check_world(w)?;
    Ok(heights(frame)[w])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameClassReport {
    pub transitive: bool,
    pub irreflexive: bool,
    pub acyclic: bool,
    pub locally_finite_height: bool,
    pub heights: Vec<ExtNat>,
}

impl FrameClassReport {
    /// Transitive and of locally finite height.
    pub fn in_lf(&self) -> bool {
        self.transitive && self.locally_finite_height
    }

    /// Finite, irreflexive and transitive.
    pub fn in_fi(&self) -> bool {
        self.transitive && self.irreflexive
    }
}

pub fn classify_frame(frame: &Frame) -> FrameClassReport {
    let heights = heights(frame);
    FrameClassReport {
        transitive: frame.is_transitive(),
        irreflexive: frame.is_irreflexive(),
        acyclic: frame.is_acyclic(),
        locally_finite_height: heights.iter().all(|h| h.is_finite()),
        heights,
    }
}

/// `({0, …, n-1}, >)`.
pub fn make_chain_desc(n: usize) -> Result<Frame, KripkeError> {
    Frame::numbered(n, (0..n).flat_map(|a| (0..a).map(move |b| (a, b))))
}

/// The fan: a root `r` below branches `B_1 … B_k`, where `B_j` is a chain of
/// `j` worlds `b{j}_0 < … < b{j}_{j-1}`. The root sees every branch world;
/// there are no edges between branches.
pub fn make_fan(k: usize) -> Result<Frame, KripkeError> {
    let mut names = vec!["r".to_string()];
    let mut edges = Vec::new();
    for j in 1..=k {
        let base = names.len();
        for i in 0..j {
            names.push(format!("b{j}_{i}"));
            edges.push((0, base + i));
            for later in i + 1..j {
                edges.push((base + i, base + later));
            }
        }
    }
    Ok(Frame::new(names, edges)?.transitive_closure())
}

/// Postorder-compiled formula for repeated evaluation over bit sets.
#[derive(Debug, Clone)]
pub struct CompiledFormula {
    nodes: Vec<Node>,
    vars: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Top,
    Var(usize),
    And(usize, usize),
    Not(usize),
    Box(usize),
}

impl CompiledFormula {
    pub fn new(phi: &Formula) -> CompiledFormula {
        let vars: Vec<String> = phi.vars().into_iter().collect();
        let mut out = CompiledFormula {
            nodes: Vec::new(),
            vars,
        };
        let mut memo = HashMap::new();
        out.push(phi, &mut memo);
        out
    }

    fn push<'a>(&mut self, phi: &'a Formula, memo: &mut HashMap<&'a Formula, usize>) -> usize {
        if let Some(&i) = memo.get(phi) {
            return i;
        }
        let node = match phi {
            Formula::Top => Node::Top,
            Formula::Var(v) => Node::Var(
                self.vars
                    .binary_search(v)
                    .expect("variable collected at compile time"),
            ),
            Formula::And(a, b) => {
                let (a, b) = (self.push(a, memo), self.push(b, memo));
                Node::And(a, b)
            }
            Formula::Not(a) => Node::Not(self.push(a, memo)),
            Formula::Box(a) => Node::Box(self.push(a, memo)),
        };
        self.nodes.push(node);
        memo.insert(phi, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    /// Sorted variable names; valuations are indexed in this order.
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Truth set of the whole formula under `vals[i] = v(vars[i])`.
    pub fn eval(&self, frame: &Frame, vals: &[WorldSet]) -> WorldSet {
        let all = frame.worlds();
        let mut sets: Vec<WorldSet> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let s = match *node {
                Node::Top => all,
                Node::Var(i) => vals[i],
                Node::And(a, b) => sets[a].intersection(sets[b]),
                Node::Not(a) => all.difference(sets[a]),
                Node::Box(a) => frame.box_set(sets[a]),
            };
            sets.push(s);
        }
        *sets.last().expect("nonempty formula")
    }

    /// Three-valued evaluation under a partial valuation: `vals_true[i]` and
    /// `vals_false[i]` are the worlds where variable `i` is decided.
    /// Returns (definitely true, definitely false).
    pub fn eval_partial(
        &self,
        frame: &Frame,
        vals_true: &[WorldSet],
        vals_false: &[WorldSet],
    ) -> (WorldSet, WorldSet) {
        let all = frame.worlds();
        let mut sets: Vec<(WorldSet, WorldSet)> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let s = match *node {
                Node::Top => (all, WorldSet::EMPTY),
                Node::Var(i) => (vals_true[i], vals_false[i]),
                Node::And(a, b) => (
                    sets[a].0.intersection(sets[b].0),
                    sets[a].1.union(sets[b].1),
                ),
                Node::Not(a) => (sets[a].1, sets[a].0),
                Node::Box(a) => (frame.box_set(sets[a].0), frame.preimage(sets[a].1)),
            };
            sets.push(s);
        }
        *sets.last().expect("nonempty formula")
    }
}

/// Bounds for the validity checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidityLimits {
    /// Largest `|worlds| · |vars|` the plain enumerator accepts.
    pub max_valuation_bits: usize,
    /// Node budget of the pruned valuation search.
    pub max_search_nodes: u64,
}

impl Default for ValidityLimits {
    fn default() -> Self {
        ValidityLimits {
            max_valuation_bits: 24,
            max_search_nodes: 50_000_000,
        }
    }
}

/// A valuation and a world where a formula fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub world: usize,
    pub valuation: BTreeMap<String, WorldSet>,
}

/// `F ⊨ φ` by enumerating all `2^(|W|·|vars φ|)` valuations of the occurring
/// variables.
pub fn frame_valid_exhaustive(
    frame: &Frame,
    phi: &Formula,
    limits: &ValidityLimits,
) -> Result<bool, KripkeError> {
    let compiled = CompiledFormula::new(phi);
    let k = compiled.vars().len();
    let n = frame.len();
    let bits = n * k;
    if bits > limits.max_valuation_bits {
        return Err(KripkeError::ResourceLimit(format!(
            "{n} worlds x {k} variables exceeds {} valuation bits",
            limits.max_valuation_bits
        )));
    }
    let all = frame.worlds();
    let mask = WorldSet::full(n).0;
    let mut vals = vec![WorldSet::EMPTY; k];
    for code in 0u64..(1u64 << bits) {
        for (i, v) in vals.iter_mut().enumerate() {
            *v = WorldSet(((code >> (i * n)) as u128) & mask);
        }
        if compiled.eval(frame, &vals) != all {
            return Ok(false);
        }
    }
    Ok(true)
}

struct ConeSearch<'a> {
    frame: &'a Frame,
    compiled: &'a CompiledFormula,
    target: usize,
    decisions: Vec<(usize, usize)>,
    vals_true: Vec<WorldSet>,
    vals_false: Vec<WorldSet>,
    nodes: u64,
    budget: u64,
}

impl ConeSearch<'_> {
    // Ok(true) when a refuting completion exists below this node.
    fn run(&mut self, depth: usize) -> Result<bool, KripkeError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(KripkeError::ResourceLimit(format!(
                "valuation search exceeded {} nodes",
                self.budget
            )));
        }
        let (t, f) = self
            .compiled
            .eval_partial(self.frame, &self.vals_true, &self.vals_false);
        if f.contains(self.target) {
            return Ok(true);
        }
        if t.contains(self.target) {
            return Ok(false);
        }
        let Some(&(var, world)) = self.decisions.get(depth) else {
            unreachable!("a fully decided cone gives a definite value");
        };
        self.vals_true[var].insert(world);
        let found = self.run(depth + 1)?;
        self.vals_true[var].remove(world);
        if found {
            // Keep the decision so the caller can read the valuation back.
            self.vals_true[var].insert(world);
            return Ok(true);
        }
        self.vals_false[var].insert(world);
        let found = self.run(depth + 1)?;
        self.vals_false[var].remove(world);
        if found {
            self.vals_false[var].insert(world);
        }
        Ok(found)
    }
}

/// Searches for a valuation refuting `phi` at the root of a generated
/// subframe whose root is `root`.
fn refute_in_cone(
    cone: &Frame,
    root: usize,
    compiled: &CompiledFormula,
    budget: u64,
) -> Result<(Option<Vec<WorldSet>>, u64), KripkeError> {
    let k = compiled.vars().len();
    let decisions = (0..cone.len())
        .flat_map(|w| (0..k).map(move |v| (v, w)))
        .collect();
    let mut search = ConeSearch {
        frame: cone,
        compiled,
        target: root,
        decisions,
        vals_true: vec![WorldSet::EMPTY; k],
        vals_false: vec![WorldSet::EMPTY; k],
        nodes: 0,
        budget,
    };
    let found = search.run(0)?;
    Ok((found.then_some(search.vals_true), search.nodes))
}

fn cone_key(cone: &Frame, root: usize) -> (Vec<u128>, usize) {
    (cone.succ.iter().map(|s| s.0).collect(), root)
}

/// Finds a valuation and a world refuting `phi` on `frame`, or `None` if
/// `F ⊨ φ`.
///
/// Truth at `w` only depends on the valuation inside the subframe generated
/// by `w`, so each world is decided on its own cone. Inside a cone the
/// valuation is built world by world, bottom-up, and a branch is cut as
/// soon as three-valued evaluation settles the value at the cone root.
/// Isomorphic cones are decided once.
pub fn frame_refutation(
    frame: &Frame,
    phi: &Formula,
    limits: &ValidityLimits,
) -> Result<Option<Refutation>, KripkeError> {
    let compiled = CompiledFormula::new(phi);
    let mut cache: HashMap<(Vec<u128>, usize), bool> = HashMap::new();
    let mut budget = limits.max_search_nodes;
    for w in 0..frame.len() {
        let (cone, root, back) = frame.generated_subframe(w);
        let key = cone_key(&cone, root);
        if cache.get(&key) == Some(&false) {
            continue;
        }
        let (found, used) = refute_in_cone(&cone, root, &compiled, budget)?;
        budget -= used;
        cache.insert(key, found.is_some());
        if let Some(vals) = found {
            let valuation = compiled
                .vars()
                .iter()
                .zip(vals)
                .map(|(var, set)| (var.clone(), set.iter().map(|u| back[u]).collect()))
                .collect();
            return Ok(Some(Refutation {
                world: w,
                valuation,
            }));
        }
    }
    Ok(None)
}

/// `F ⊨ φ`: `phi` holds at every world under every valuation.
pub fn frame_valid(
    frame: &Frame,
    phi: &Formula,
    limits: &ValidityLimits,
) -> Result<bool, KripkeError> {
    Ok(frame_refutation(frame, phi, limits)?.is_none())
}

/// `phi` holds at `w` under every valuation.
pub fn valid_at(
    frame: &Frame,
    w: usize,
    phi: &Formula,
    limits: &ValidityLimits,
) -> Result<bool, KripkeError> {
    frame.check_world(w)?;
    let compiled = CompiledFormula::new(phi);
    let (cone, root, _) = frame.generated_subframe(w);
    Ok(
        refute_in_cone(&cone, root, &compiled, limits.max_search_nodes)?
            .0
            .is_none(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn model(frame: Frame, vals: &[(&str, &[usize])]) -> Model {
        let valuation = vals
            .iter()
            .map(|(v, ws)| (v.to_string(), ws.iter().copied().collect()))
            .collect();
        Model::new(frame, valuation).unwrap()
    }

    fn reflexive_point() -> Frame {
        Frame::numbered(1, [(0, 0)]).unwrap()
    }

    #[test]
    fn frame_construction_errors() {
        assert_eq!(Frame::numbered(0, []), Err(KripkeError::EmptyFrame));
        assert_eq!(
            Frame::numbered(2, [(0, 2)]),
            Err(KripkeError::WorldOutOfRange(2))
        );
        assert!(matches!(
            Frame::new(vec!["a".into(), "a".into()], []),
            Err(KripkeError::DuplicateWorld(_))
        ));
        assert!(matches!(
            Frame::numbered(200, []),
            Err(KripkeError::TooManyWorlds(200))
        ));
    }

    #[test]
    fn frame_file_rejects_unknown_keys_and_worlds() {
        let ok = r#"{"worlds": ["a", "b"], "edges": [["a", "b"]]}"#;
        let f = Frame::from_json(ok).unwrap();
        assert!(f.has_edge(0, 1));
        assert_eq!(Frame::from_json(&f.to_json()).unwrap(), f);
        let extra = r#"{"worlds": ["a"], "edges": [], "extra": 1}"#;
        assert!(matches!(
            Frame::from_json(extra),
            Err(KripkeError::Format(_))
        ));
        let unknown = r#"{"worlds": ["a"], "edges": [["a", "z"]]}"#;
        assert_eq!(
            Frame::from_json(unknown),
            Err(KripkeError::UnknownWorld("z".into()))
        );
    }

    #[test]
    fn satisfies_examples() {
        let m = model(make_chain_desc(1).unwrap(), &[]);
        assert!(m.satisfies(0, &Formula::Top).unwrap());

        let m = model(make_chain_desc(3).unwrap(), &[("p", &[0])]);
        let bp = parse("[]p").unwrap();
        assert!(m.satisfies(1, &bp).unwrap());
        assert!(!m.satisfies(2, &bp).unwrap());

        let m = model(Frame::numbered(1, []).unwrap(), &[]);
        assert!(m.satisfies(0, &parse("[]F").unwrap()).unwrap());

        assert_eq!(
            m.satisfies(5, &Formula::Top),
            Err(KripkeError::WorldOutOfRange(5))
        );
    }

    #[test]
    fn model_true_examples() {
        let frame = Frame::numbered(2, [(0, 1)]).unwrap();
        let bp = parse("[]p").unwrap();
        assert!(model(frame.clone(), &[]).model_true(&Formula::Top));
        assert!(model(frame.clone(), &[("p", &[1])]).model_true(&bp));
        assert!(!model(frame, &[("p", &[0])]).model_true(&bp));
    }

    #[test]
    fn valuation_must_stay_inside_frame() {
        let frame = Frame::numbered(2, []).unwrap();
        let bad = BTreeMap::from([("p".to_string(), WorldSet::singleton(3))]);
        assert_eq!(
            Model::new(frame, bad),
            Err(KripkeError::ValuationOutOfRange("p".into()))
        );
    }

    #[test]
    fn frame_valid_examples() {
        let limits = ValidityLimits::default();
        let loeb = Formula::loeb("p");
        let taut = parse("p -> p").unwrap();
        for frame in [make_chain_desc(3).unwrap(), reflexive_point()] {
            assert!(frame_valid(&frame, &taut, &limits).unwrap());
        }
        assert!(frame_valid(&make_chain_desc(3).unwrap(), &loeb, &limits).unwrap());
        assert!(!frame_valid(&reflexive_point(), &loeb, &limits).unwrap());
        assert!(!frame_valid_exhaustive(&reflexive_point(), &loeb, &limits).unwrap());
    }

    #[test]
    fn refutation_is_a_real_countermodel() {
        let limits = ValidityLimits::default();
        let frame = Frame::numbered(3, [(0, 1), (1, 2)]).unwrap();
        let phi = Formula::axiom_4("p");
        let r = frame_refutation(&frame, &phi, &limits).unwrap().unwrap();
        let m = Model::new(frame, r.valuation).unwrap();
        assert!(!m.satisfies(r.world, &phi).unwrap());
    }

    #[test]
    fn exhaustive_enumeration_guard() {
        let limits = ValidityLimits {
            max_valuation_bits: 4,
            ..Default::default()
        };
        let err =
            frame_valid_exhaustive(&make_chain_desc(5).unwrap(), &Formula::loeb("p"), &limits);
        assert!(matches!(err, Err(KripkeError::ResourceLimit(_))));
    }

    #[test]
    fn search_budget_guard() {
        let limits = ValidityLimits {
            max_search_nodes: 3,
            ..Default::default()
        };
        let phi = parse("[](p & []p -> q) | [](q & []q -> p)").unwrap();
        let err = frame_valid(&make_fan(3).unwrap(), &phi, &limits);
        assert!(matches!(err, Err(KripkeError::ResourceLimit(_))));
    }

    #[test]
    fn height_examples() {
        assert_eq!(
            height(&make_chain_desc(1).unwrap(), 0),
            Ok(ExtNat::Finite(0))
        );
        assert_eq!(
            height(&make_chain_desc(3).unwrap(), 2),
            Ok(ExtNat::Finite(2))
        );
        assert_eq!(height(&reflexive_point(), 0), Ok(ExtNat::Infinite));
        assert_eq!(
            height(&reflexive_point(), 1),
            Err(KripkeError::WorldOutOfRange(1))
        );
        // A world that only reaches a cycle is also of infinite height.
        let f = Frame::numbered(3, [(0, 1), (1, 2), (2, 1)]).unwrap();
        assert_eq!(heights(&f), vec![ExtNat::Infinite; 3]);
    }

    #[test]
    fn classify_examples() {
        let r = classify_frame(&make_chain_desc(3).unwrap());
        assert!(r.transitive && r.irreflexive && r.acyclic && r.locally_finite_height);
        assert!(r.in_lf() && r.in_fi());
        assert_eq!(
            r.heights,
            vec![ExtNat::Finite(0), ExtNat::Finite(1), ExtNat::Finite(2)]
        );

        let r = classify_frame(&reflexive_point());
        assert!(!r.irreflexive && !r.locally_finite_height);

        let r = classify_frame(&Frame::numbered(2, [(0, 1), (1, 0)]).unwrap());
        assert!(!r.transitive && !r.locally_finite_height && !r.acyclic);
    }

    #[test]
    fn generator_examples() {
        let one = make_chain_desc(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.edge_count(), 0);

        let fan = make_fan(2).unwrap();
        assert_eq!(fan.len(), 4);
        let r = fan.index_of("r").unwrap();
        assert_eq!(fan.successors(r).len(), 3);
        let (b1, b20, b21) = (
            fan.index_of("b1_0").unwrap(),
            fan.index_of("b2_0").unwrap(),
            fan.index_of("b2_1").unwrap(),
        );
        assert!(fan.has_edge(b20, b21));
        for b in [b20, b21] {
            assert!(!fan.has_edge(b1, b) && !fan.has_edge(b, b1));
        }
        assert_eq!(fan.edge_count(), 4);

        for k in 1..=12 {
            let fan = make_fan(k).unwrap();
            let report = classify_frame(&fan);
            assert!(report.transitive && report.irreflexive, "k = {k}");
            assert_eq!(report.heights[0], ExtNat::Finite(k));
            assert_eq!(fan.len(), 1 + k * (k + 1) / 2);
        }
    }

    #[test]
    fn generated_subframe_of_fan_branch_is_a_chain() {
        let fan = make_fan(4).unwrap();
        let top = fan.index_of("b4_0").unwrap();
        let (cone, root, back) = fan.generated_subframe(top);
        assert_eq!(cone.len(), 4);
        assert_eq!(back[root], top);
        assert!(classify_frame(&cone).transitive);
        assert_eq!(heights(&cone)[root], ExtNat::Finite(3));
    }
}
