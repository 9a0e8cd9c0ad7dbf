//! Modal algebras.
//!
//! Finite modal algebras are handled as complex algebras `Alg(F)` of finite
//! frames: the carrier is the powerset of the worlds and `□X = W ∖ R⁻¹(W ∖ X)`.
//! Every finite modal algebra is isomorphic to one of these.
//!
//! The frame `(ω+1, >)` is handled symbolically through the subalgebra of
//! sets whose trace on `ω` is finite or cofinite; see [`CofinElement`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{subformulas, Formula};
use crate::kripke::Frame;
use crate::worldset::WorldSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("element {0:?} does not belong to the algebra")]
    ForeignElement(WorldSet),
    #[error("no value for variable `{0}`")]
    UnboundVariable(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed element: {0}")]
    Format(String),
}

/// An element of a finite complex algebra: a set of atoms (worlds).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element(pub WorldSet);

impl Element {
    pub fn atoms(self) -> WorldSet {
        self.0
    }
}

/// Bounds for exhaustive equation checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquationLimits {
    /// Largest `|atoms| · |vars|` accepted.
    pub max_valuation_bits: usize,
    /// Read unbound variables as `0` instead of failing.
    pub unbound_as_zero: bool,
}

impl Default for EquationLimits {
    fn default() -> Self {
        EquationLimits {
            max_valuation_bits: 24,
            unbound_as_zero: false,
        }
    }
}

/// `Alg(F)` for a finite frame `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinModalAlgebra {
    frame: Frame,
}

impl FinModalAlgebra {
    pub fn from_frame(frame: Frame) -> FinModalAlgebra {
        FinModalAlgebra { frame }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn atom_count(&self) -> usize {
        self.frame.len()
    }

    pub fn top(&self) -> Element {
        Element(self.frame.worlds())
    }

    pub fn bottom(&self) -> Element {
        Element(WorldSet::EMPTY)
    }

    pub fn element(&self, atoms: WorldSet) -> Result<Element, AlgebraError> {
        if atoms.is_subset(self.frame.worlds()) {
            Ok(Element(atoms))
        } else {
            Err(AlgebraError::ForeignElement(atoms))
        }
    }

    /// Every element of the carrier, in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        let n = self.atom_count();
        assert!(n < 64, "carrier of 2^{n} elements is not enumerable");
        (0u64..1 << n).map(|bits| Element(WorldSet(bits as u128)))
    }

    pub fn meet(&self, x: Element, y: Element) -> Element {
        Element(x.0.intersection(y.0))
    }

    pub fn join(&self, x: Element, y: Element) -> Element {
        Element(x.0.union(y.0))
    }

    pub fn complement(&self, x: Element) -> Element {
        Element(self.frame.worlds().difference(x.0))
    }

    pub fn leq(&self, x: Element, y: Element) -> bool {
        x.0.is_subset(y.0)
    }

    /// `□X = W ∖ R⁻¹(W ∖ X)`.
    pub fn box_op(&self, x: Element) -> Result<Element, AlgebraError> {
        let x = self.element(x.0)?;
        Ok(self.box_unchecked(x))
    }

    pub(crate) fn box_unchecked(&self, x: Element) -> Element {
        let w = self.frame.worlds();
        Element(w.difference(self.frame.preimage(w.difference(x.0))))
    }

    /// `◊X = R⁻¹(X)`, i.e. `-□-X`.
    pub fn diamond(&self, x: Element) -> Element {
        self.complement(self.box_unchecked(self.complement(x)))
    }

    /// `◊ⁿ1`.
    pub fn diamond_power(&self, n: usize) -> Element {
        (0..n).fold(self.top(), |acc, _| self.diamond(acc))
    }

    /// Homomorphic evaluation of `term` under `valuation`.
    pub fn eval_term(
        &self,
        term: &Formula,
        valuation: &BTreeMap<String, Element>,
    ) -> Result<Element, AlgebraError> {
        self.eval_with(term, valuation, false)
    }

    pub fn eval_with(
        &self,
        term: &Formula,
        valuation: &BTreeMap<String, Element>,
        unbound_as_zero: bool,
    ) -> Result<Element, AlgebraError> {
        Ok(match term {
            Formula::Top => self.top(),
            Formula::Var(v) => match valuation.get(v) {
                Some(x) => self.element(x.0)?,
                None if unbound_as_zero => self.bottom(),
                None => return Err(AlgebraError::UnboundVariable(v.clone())),
            },
            Formula::And(a, b) => self.meet(
                self.eval_with(a, valuation, unbound_as_zero)?,
                self.eval_with(b, valuation, unbound_as_zero)?,
            ),
            Formula::Not(a) => self.complement(self.eval_with(a, valuation, unbound_as_zero)?),
            Formula::Box(a) => self.box_unchecked(self.eval_with(a, valuation, unbound_as_zero)?),
        })
    }

    /// Finds a valuation of the occurring variables with `lhs ≠ rhs`.
    pub fn equation_counterexample(
        &self,
        lhs: &Formula,
        rhs: &Formula,
        limits: &EquationLimits,
    ) -> Result<Option<BTreeMap<String, Element>>, AlgebraError> {
        let vars: Vec<String> = lhs.vars().union(&rhs.vars()).cloned().collect();
        let n = self.atom_count();
        let bits = n * vars.len();
        if bits > limits.max_valuation_bits {
            return Err(AlgebraError::ResourceLimit(format!(
                "{n} atoms x {} variables exceeds {} valuation bits",
                vars.len(),
                limits.max_valuation_bits
            )));
        }
        let mask = WorldSet::full(n).0;
        for code in 0u64..(1u64 << bits) {
            let valuation: BTreeMap<String, Element> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    (
                        v.clone(),
                        Element(WorldSet(((code >> (i * n)) as u128) & mask)),
                    )
                })
                .collect();
            if self.eval_term(lhs, &valuation)? != self.eval_term(rhs, &valuation)? {
                return Ok(Some(valuation));
            }
        }
        Ok(None)
    }

    /// `lhs = rhs` under every valuation of the occurring variables.
    pub fn equation_holds(
        &self,
        lhs: &Formula,
        rhs: &Formula,
        limits: &EquationLimits,
    ) -> Result<bool, AlgebraError> {
        Ok(self.equation_counterexample(lhs, rhs, limits)?.is_none())
    }

    /// `□1 = 1` and `□(x∧y) = □x ∧ □y` over the whole carrier.
    pub fn check_modal_laws(&self) -> bool {
        if self.box_unchecked(self.top()) != self.top() {
            return false;
        }
        let elems: Vec<Element> = self.elements().collect();
        elems.iter().all(|&x| {
            elems.iter().all(|&y| {
                self.box_unchecked(self.meet(x, y))
                    == self.meet(self.box_unchecked(x), self.box_unchecked(y))
            })
        })
    }

    pub fn diamond_chain(&self) -> DiamondChain {
        let mut chain = vec![self.top()];
        loop {
            let last = *chain.last().expect("chain starts with 1");
            let next = self.diamond(last);
            if next == last {
                let index = chain.len() - 1;
                return DiamondChain {
                    chain,
                    index,
                    value: last,
                };
            }
            chain.push(next);
        }
    }

    /// The meet of the whole chain `{◊ⁿ1}` (the stabilized value).
    pub fn chain_meet(&self) -> Element {
        self.diamond_chain().value
    }

    /// Checks the infinite distributive law for the nested term
    /// `□(x_k ∨ □(x_{k-1} ∨ … □(x_1 ∨ y)…))`: the meet over all `n` of the
    /// term at `y = ◊ⁿ1` equals the term at `y = 0`. Requires `⋀◊ⁿ1 = 0`.
    pub fn check_infdist(&self, xs: &[Element]) -> Result<bool, AlgebraError> {
        for &x in xs {
            self.element(x.0)?;
        }
        let chain = self.diamond_chain();
        if chain.value != self.bottom() {
            return Err(AlgebraError::Precondition(
                "the diamond chain does not stabilize at 0".into(),
            ));
        }
        let nested = |y: Element| {
            xs.iter()
                .fold(y, |acc, &x| self.box_unchecked(self.join(x, acc)))
        };
        let meet = chain
            .chain
            .iter()
            .fold(self.top(), |acc, &d| self.meet(acc, nested(d)));
        Ok(meet == nested(self.bottom()))
    }

    pub fn classify(&self) -> Result<AlgebraClassReport, AlgebraError> {
        classify_algebra(self)
    }
}

/// `1 = ◊⁰1 ≥ ◊¹1 ≥ …` up to the first repetition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiamondChain {
    /// `◊⁰1, …, ◊ᵐ1`.
    pub chain: Vec<Element>,
    /// The first `m` with `◊ᵐ1 = ◊ᵐ⁺¹1`.
    pub index: usize,
    /// `◊ᵐ1`, which is also the meet of the chain.
    pub value: Element,
}

/// Membership of an algebra in one of the classes defined by `□x ≤ □□x`
/// plus an extra condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NonMember,
    /// The algebra fails `□x ≤ □□x`, which both class definitions require.
    NotApplicable,
    /// Known from the separation argument; backed by finitely many instance checks.
    Asserted,
}

impl Membership {
    pub fn is_member(self) -> bool {
        matches!(self, Membership::Member | Membership::Asserted)
    }

    fn from_flag(flag: bool) -> Membership {
        if flag {
            Membership::Member
        } else {
            Membership::NonMember
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum ChainMeet {
    Finite(Element),
    Omega(CofinElement),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraClassReport {
    pub satisfies_4: bool,
    /// `None` when the chain never stabilizes.
    pub chain_stabilization_index: Option<usize>,
    pub chain_meet: ChainMeet,
    pub in_a_diamond: Membership,
    pub in_a_nc: Membership,
    pub in_a_loeb: bool,
}

impl AlgebraClassReport {
    /// The class inclusions `A_◇ ⊆ A_nc ⊆ A_Löb`.
    pub fn inclusions_hold(&self) -> bool {
        (!self.in_a_diamond.is_member() || self.in_a_nc.is_member())
            && (!self.in_a_nc.is_member() || self.in_a_loeb)
    }
}

/// `□x ∧ □□x = □x`.
pub fn four_equation() -> (Formula, Formula) {
    let bx = Formula::var("x").boxed();
    (bx.clone().and(bx.clone().boxed()), bx)
}

/// `□(□x → x) → □x = 1`.
pub fn loeb_equation() -> (Formula, Formula) {
    (Formula::loeb("x"), Formula::Top)
}

/// Class membership of a finite algebra.
///
/// On a finite algebra the chain `◊ⁿ1` stabilizes at some `s`. If `s ≠ 0`,
/// `φ = ◊ᵐ⊤` satisfies every premise of the non-compact rule (its value `s`
/// lies below each `◊ⁿ1`) while `φ ⊃ ⊥` fails, so the rule is true exactly
/// when `s = 0`. Both `A_◇` and `A_nc` therefore reduce to `s = 0` here.
pub fn classify_algebra(algebra: &FinModalAlgebra) -> Result<AlgebraClassReport, AlgebraError> {
    let limits = EquationLimits::default();
    let (l4, r4) = four_equation();
    let satisfies_4 = algebra.equation_holds(&l4, &r4, &limits)?;
    let (ll, rl) = loeb_equation();
    let in_a_loeb = algebra.equation_holds(&ll, &rl, &limits)?;
    let chain = algebra.diamond_chain();
    let chain_is_zero = chain.value == algebra.bottom();
    let (in_a_diamond, in_a_nc) = if satisfies_4 {
        (
            Membership::from_flag(chain_is_zero),
            Membership::from_flag(chain_is_zero),
        )
    } else {
        (Membership::NotApplicable, Membership::NotApplicable)
    };
    Ok(AlgebraClassReport {
        satisfies_4,
        chain_stabilization_index: Some(chain.index),
        chain_meet: ChainMeet::Finite(chain.value),
        in_a_diamond,
        in_a_nc,
        in_a_loeb,
    })
}

/// A point of `ω+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    Nat(u64),
    Omega,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Nat(n) => write!(f, "{n}"),
            Point::Omega => write!(f, "w"),
        }
    }
}

/// A subset `X ⊆ ω+1` whose trace on `ω` is finite or cofinite.
///
/// With `cofinite_base == false` the naturals in `X` are exactly
/// `exceptions`; with `cofinite_base == true` they are all naturals except
/// `exceptions`. `omega_member` says whether `ω ∈ X`. Each set has exactly one
/// representation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CofinElement {
    pub exceptions: BTreeSet<u64>,
    pub cofinite_base: bool,
    pub omega_member: bool,
}

impl CofinElement {
    pub fn finite(naturals: impl IntoIterator<Item = u64>, omega_member: bool) -> CofinElement {
        CofinElement {
            exceptions: naturals.into_iter().collect(),
            cofinite_base: false,
            omega_member,
        }
    }

    pub fn cofinite(missing: impl IntoIterator<Item = u64>, omega_member: bool) -> CofinElement {
        CofinElement {
            exceptions: missing.into_iter().collect(),
            cofinite_base: true,
            omega_member,
        }
    }

    pub fn top() -> CofinElement {
        CofinElement::cofinite([], true)
    }

    pub fn bottom() -> CofinElement {
        CofinElement::finite([], false)
    }

    /// `{ω}`
    pub fn omega_only() -> CofinElement {
        CofinElement::finite([], true)
    }

    /// `{0, …, n-1}`
    pub fn initial_segment(n: u64) -> CofinElement {
        CofinElement::finite(0..n, false)
    }

    pub fn contains(&self, p: Point) -> bool {
        match p {
            Point::Omega => self.omega_member,
            Point::Nat(n) => self.contains_nat(n),
        }
    }

    pub fn contains_nat(&self, n: u64) -> bool {
        self.exceptions.contains(&n) != self.cofinite_base
    }

    /// Every natural belongs to the set.
    pub fn contains_all_naturals(&self) -> bool {
        self.cofinite_base && self.exceptions.is_empty()
    }

    /// Largest exception, if any.
    pub fn max_exception(&self) -> Option<u64> {
        self.exceptions.iter().next_back().copied()
    }

    /// Least natural not in the set.
    pub fn least_missing_natural(&self) -> Option<u64> {
        if self.cofinite_base {
            self.exceptions.iter().next().copied()
        } else {
            Some(first_gap(&self.exceptions))
        }
    }

    /// Least natural in the set.
    pub fn least_natural(&self) -> Option<u64> {
        if self.cofinite_base {
            Some(first_gap(&self.exceptions))
        } else {
            self.exceptions.iter().next().copied()
        }
    }

    pub fn complement(&self) -> CofinElement {
        CofinElement {
            exceptions: self.exceptions.clone(),
            cofinite_base: !self.cofinite_base,
            omega_member: !self.omega_member,
        }
    }

    pub fn meet(&self, other: &CofinElement) -> CofinElement {
        let omega_member = self.omega_member && other.omega_member;
        match (self.cofinite_base, other.cofinite_base) {
            (false, false) => CofinElement::finite(
                self.exceptions.intersection(&other.exceptions).copied(),
                omega_member,
            ),
            (false, true) => CofinElement::finite(
                self.exceptions.difference(&other.exceptions).copied(),
                omega_member,
            ),
            (true, false) => CofinElement::finite(
                other.exceptions.difference(&self.exceptions).copied(),
                omega_member,
            ),
            (true, true) => CofinElement::cofinite(
                self.exceptions.union(&other.exceptions).copied(),
                omega_member,
            ),
        }
    }

    pub fn join(&self, other: &CofinElement) -> CofinElement {
        self.complement().meet(&other.complement()).complement()
    }

    pub fn leq(&self, other: &CofinElement) -> bool {
        self.meet(other) == *self
    }

    /// `□X = {w | ∀u < w, u ∈ X}` for the relation `>`.
    ///
    /// If `X` contains every natural, `□X = ω+1`. Otherwise, with `k` the least
    /// natural missing from `X`, `□X = {0, …, k}`.
    pub fn box_op(&self) -> CofinElement {
        match self.least_missing_natural() {
            None => CofinElement::top(),
            Some(k) => CofinElement::initial_segment(k + 1),
        }
    }

    /// `◊X = R⁻¹(X) = {w | ∃u < w, u ∈ X}`: with `m` the least natural of
    /// `X`, everything above `m` including `ω`; empty if `X ∩ ω = ∅`.
    pub fn diamond(&self) -> CofinElement {
        match self.least_natural() {
            None => CofinElement::bottom(),
            Some(m) => CofinElement::cofinite(0..=m, true),
        }
    }

    /// Restriction to the truncated frame `{0, …, n} ∪ {ω}`, as a bit set with
    /// `ω` at index `n + 1`.
    pub fn truncate(&self, n: u64) -> WorldSet {
        let mut out: WorldSet = (0..=n)
            .filter(|&i| self.contains_nat(i))
            .map(|i| i as usize)
            .collect();
        if self.omega_member {
            out.insert(n as usize + 1);
        }
        out
    }
}

fn first_gap(set: &BTreeSet<u64>) -> u64 {
    let mut expected = 0;
    for &x in set {
        if x != expected {
            break;
        }
        expected += 1;
    }
    expected
}

impl fmt::Display for CofinElement {
    /// `{0,3,w}` for finite traces, `~{5}` for the complement of a finite set.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // The complement notation lists what is missing, including ω.
        let (prefix, omega_listed) = if self.cofinite_base {
            ("~", !self.omega_member)
        } else {
            ("", self.omega_member)
        };
        let mut items: Vec<String> = self.exceptions.iter().map(|n| n.to_string()).collect();
        if omega_listed {
            items.push("w".into());
        }
        write!(f, "{prefix}{{{}}}", items.join(","))
    }
}

impl fmt::Debug for CofinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for CofinElement {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (negated, rest) = match s.strip_prefix('~') {
            Some(r) => (true, r.trim_start()),
            None => (false, s),
        };
        let inner = rest
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| {
                AlgebraError::Format(format!("expected `{{...}}` or `~{{...}}`, got `{s}`"))
            })?;
        let mut naturals = BTreeSet::new();
        let mut omega = false;
        for item in inner.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            if item == "w" {
                omega = true;
            } else {
                let n = item
                    .parse()
                    .map_err(|_| AlgebraError::Format(format!("bad point `{item}`")))?;
                naturals.insert(n);
            }
        }
        let listed = CofinElement {
            exceptions: naturals,
            cofinite_base: false,
            omega_member: omega,
        };
        Ok(if negated { listed.complement() } else { listed })
    }
}

/// A valuation into the `ω+1` algebra.
pub type OmegaValuation = BTreeMap<String, CofinElement>;

/// The finite/cofinite subalgebra of `Alg((ω+1, >))`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OmegaPlusAlgebra;

/// Result of running the diamond chain on the `ω+1` algebra: it never
/// stabilizes, and `◊ⁿ1 = (ω+1) ∖ {0, …, n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonStabilizingChain;

impl NonStabilizingChain {
    pub fn term(&self, n: u64) -> CofinElement {
        CofinElement::cofinite(0..n, true)
    }
}

impl OmegaPlusAlgebra {
    pub fn diamond_power(&self, n: u64) -> CofinElement {
        NonStabilizingChain.term(n)
    }

    pub fn diamond_chain(&self) -> NonStabilizingChain {
        NonStabilizingChain
    }

    /// The infimum of `{◊ⁿ1}` inside the subalgebra, namely `{ω}`.
    ///
    /// `ω` lies in every `◊ⁿ1` and each natural `j` drops out at `n = j + 1`,
    /// so the intersection is `{ω}`, which is representable and hence the
    /// greatest lower bound.
    pub fn chain_meet(&self) -> CofinElement {
        CofinElement::omega_only()
    }

    pub fn eval(
        &self,
        term: &Formula,
        valuation: &OmegaValuation,
    ) -> Result<CofinElement, AlgebraError> {
        Ok(match term {
            Formula::Top => CofinElement::top(),
            Formula::Var(v) => valuation
                .get(v)
                .cloned()
                .ok_or_else(|| AlgebraError::UnboundVariable(v.clone()))?,
            Formula::And(a, b) => self.eval(a, valuation)?.meet(&self.eval(b, valuation)?),
            Formula::Not(a) => self.eval(a, valuation)?.complement(),
            Formula::Box(a) => self.eval(a, valuation)?.box_op(),
        })
    }

    /// Checks `lhs = rhs` on the given valuations only.
    pub fn equation_holds_on(
        &self,
        lhs: &Formula,
        rhs: &Formula,
        valuations: &[OmegaValuation],
    ) -> Result<bool, AlgebraError> {
        for v in valuations {
            if self.eval(lhs, v)? != self.eval(rhs, v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Class report. `A_◇` membership is decided exactly; `□x ≤ □□x` and the
    /// Löb equation are checked on `samples`; `A_nc` membership is
    /// [`Membership::Asserted`], backed by the claim checks in `claim_corpus`.
    pub fn classify(
        &self,
        samples: &[CofinElement],
        claim_corpus: &[(Formula, OmegaValuation)],
        claim_n_max: u64,
    ) -> Result<OmegaClassReport, AlgebraError> {
        let valuations: Vec<OmegaValuation> = samples
            .iter()
            .map(|x| BTreeMap::from([("x".to_string(), x.clone())]))
            .collect();
        let (l4, r4) = four_equation();
        let (ll, rl) = loeb_equation();
        let satisfies_4 = self.equation_holds_on(&l4, &r4, &valuations)?;
        let in_a_loeb = self.equation_holds_on(&ll, &rl, &valuations)?;
        let mut claims_verified = 0;
        for (psi, v) in claim_corpus {
            if check_claim(psi, v, claim_n_max)?.witness.is_some() {
                claims_verified += 1;
            }
        }
        let meet = self.chain_meet();
        let report = AlgebraClassReport {
            satisfies_4,
            chain_stabilization_index: None,
            chain_meet: ChainMeet::Omega(meet.clone()),
            in_a_diamond: Membership::from_flag(meet == CofinElement::bottom()),
            in_a_nc: if claims_verified == claim_corpus.len() {
                Membership::Asserted
            } else {
                Membership::NonMember
            },
            in_a_loeb,
        };
        Ok(OmegaClassReport {
            report,
            samples_checked: samples.len(),
            claims_checked: claim_corpus.len(),
            claims_verified,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaClassReport {
    pub report: AlgebraClassReport,
    pub samples_checked: usize,
    pub claims_checked: usize,
    pub claims_verified: usize,
}

/// `v_n(p) = v(p) ∪ {n}` if `ω ∈ v(p)`, else `v(p) ∖ {n}`.
pub fn vn_transform(valuation: &OmegaValuation, n: u64) -> OmegaValuation {
    valuation
        .iter()
        .map(|(var, x)| {
            let mut y = x.clone();
            // Adding n to a cofinite set removes it from the exception list.
            let add = x.omega_member;
            if add != y.cofinite_base {
                y.exceptions.insert(n);
            } else {
                y.exceptions.remove(&n);
            }
            (var.clone(), y)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimOutcome {
    /// Least `N ≤ n_max` such that every `n ∈ [N, n_max]` passes, if any.
    pub witness: Option<u64>,
    pub n_max: u64,
    /// The `n ≤ n_max` where `ω ∈ v(α) ⇔ n ∈ v_n(α)` fails for some `α`.
    pub failing: Vec<u64>,
}

/// Searches for `N` such that for all `n ∈ [N, n_max]` and every
/// subformula `α` of `psi`: `ω ∈ v(α) ⇔ n ∈ v_n(α)`.
pub fn check_claim(
    psi: &Formula,
    valuation: &OmegaValuation,
    n_max: u64,
) -> Result<ClaimOutcome, AlgebraError> {
    let alg = OmegaPlusAlgebra;
    let subs: Vec<Formula> = subformulas(psi).into_iter().collect();
    let at_omega: Vec<bool> = subs
        .iter()
        .map(|a| Ok(alg.eval(a, valuation)?.omega_member))
        .collect::<Result<_, AlgebraError>>()?;
    let mut failing = Vec::new();
    for n in 0..=n_max {
        let vn = vn_transform(valuation, n);
        for (a, &expected) in subs.iter().zip(&at_omega) {
            if alg.eval(a, &vn)?.contains_nat(n) != expected {
                failing.push(n);
                break;
            }
        }
    }
    let witness = match failing.last() {
        None => Some(0),
        Some(&last) if last < n_max => Some(last + 1),
        Some(_) => None,
    };
    Ok(ClaimOutcome {
        witness,
        n_max,
        failing,
    })
}
