//! Prime filters, Q-filters and the dual frame `Frm_Q(A)`.
//!
//! Two algebras are supported through [`FilterSpace`]: finite complex
//! algebras, whose prime filters are the principal ultrafilters at atoms,
//! and the `ω+1` algebra restricted to a window of principal filters plus
//! the single non-principal ultrafilter.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{CofinElement, Element, FinModalAlgebra, OmegaPlusAlgebra, Point};
use crate::kripke::Frame;
use crate::worldset::WorldSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("family has no meet in the algebra: {0}")]
    MeetMissing(String),
    #[error("too many families: {0} exceeds the limit of {1}")]
    TooManyFamilies(usize, usize),
    #[error("carrier too large to enumerate: {0} atoms")]
    CarrierTooLarge(usize),
    #[error(transparent)]
    Kripke(#[from] crate::kripke::KripkeError),
}

/// A family `{f(◊ⁿ1) | n ∈ ω}` where `f = □(z_d ∨ □(z_{d-1} ∨ … □(z_1 ∨ ·)))`.
/// `wrappers` lists `z_1, …, z_d`, innermost first; the empty list is the
/// chain `{◊ⁿ1}` itself.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Family<E> {
    pub wrappers: Vec<E>,
}

impl<E> Family<E> {
    pub fn diamond_chain() -> Family<E> {
        Family {
            wrappers: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.wrappers.len()
    }
}

/// A family of subsets of the algebra, built level by level:
/// `Q₀ = {{◊ⁿ1}}` and `Q_{d+1} = {{□(z ∨ x) | x ∈ X} | z ∈ generators, X ∈ Q_d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSet<E> {
    pub levels: Vec<Vec<Family<E>>>,
}

impl<E: Clone> QSet<E> {
    pub fn empty() -> QSet<E> {
        QSet { levels: Vec::new() }
    }

    /// `Q₀` alone.
    pub fn q0() -> QSet<E> {
        QSet {
            levels: vec![vec![Family::diamond_chain()]],
        }
    }

    pub fn families(&self) -> impl Iterator<Item = &Family<E>> {
        self.levels.iter().flatten()
    }

    pub fn family_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn level_counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }
}

/// Algebras whose prime filters can be listed and whose Q-families can be
/// decided against them.
pub trait FilterSpace {
    type Elem: Clone + Ord + fmt::Debug;
    type Filter: Clone + Ord + fmt::Debug + fmt::Display;

    fn top(&self) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn meet(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn join(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn complement(&self, x: &Self::Elem) -> Self::Elem;
    fn box_op(&self, x: &Self::Elem) -> Self::Elem;
    fn diamond_power(&self, n: usize) -> Self::Elem;

    /// All prime filters (for infinite algebras, those inside the window).
    fn prime_filters(&self) -> Vec<Self::Filter>;

    fn contains(&self, filter: &Self::Filter, x: &Self::Elem) -> bool;

    /// The distinct values of a family, or `None` if it has infinitely many.
    fn family_values(&self, family: &Family<Self::Elem>) -> Option<Vec<Self::Elem>>;

    /// `⋀X` for a family `X`.
    fn family_meet(&self, family: &Family<Self::Elem>) -> Result<Self::Elem, DualityError>;

    /// `X ⊆ F`.
    fn family_within(&self, family: &Family<Self::Elem>, filter: &Self::Filter) -> bool;

    /// `□⁻¹F ⊆ G`.
    fn box_preimage_within(&self, f: &Self::Filter, g: &Self::Filter) -> bool;

    fn apply_wrappers(&self, wrappers: &[Self::Elem], x: Self::Elem) -> Self::Elem {
        wrappers
            .iter()
            .fold(x, |acc, z| self.box_op(&self.join(z, &acc)))
    }
}

/// Prime filter of a finite algebra: principal at an atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomFilter {
    pub generator_atom: usize,
}

impl fmt::Display for AtomFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "^{}", self.generator_atom)
    }
}

/// Largest carrier whose elements [`FinModalAlgebra`] enumerates for the
/// dual relation.
pub const MAX_ENUMERATED_ATOMS: usize = 16;

impl FilterSpace for FinModalAlgebra {
    type Elem = Element;
    type Filter = AtomFilter;

    fn top(&self) -> Element {
        FinModalAlgebra::top(self)
    }

    fn bottom(&self) -> Element {
        FinModalAlgebra::bottom(self)
    }

    fn meet(&self, x: &Element, y: &Element) -> Element {
        FinModalAlgebra::meet(self, *x, *y)
    }

    fn join(&self, x: &Element, y: &Element) -> Element {
        FinModalAlgebra::join(self, *x, *y)
    }

    fn complement(&self, x: &Element) -> Element {
        FinModalAlgebra::complement(self, *x)
    }

    fn box_op(&self, x: &Element) -> Element {
        self.box_unchecked(*x)
    }

    fn diamond_power(&self, n: usize) -> Element {
        FinModalAlgebra::diamond_power(self, n)
    }

    fn prime_filters(&self) -> Vec<AtomFilter> {
        (0..self.atom_count())
            .map(|generator_atom| AtomFilter { generator_atom })
            .collect()
    }

    fn contains(&self, filter: &AtomFilter, x: &Element) -> bool {
        x.atoms().contains(filter.generator_atom)
    }

    fn family_values(&self, family: &Family<Element>) -> Option<Vec<Element>> {
        // ◊ⁿ1 is constant from the stabilization index on.
        let chain = self.diamond_chain();
        let values: BTreeSet<Element> = chain
            .chain
            .iter()
            .map(|&d| self.apply_wrappers(&family.wrappers, d))
            .collect();
        Some(values.into_iter().collect())
    }

    fn family_meet(&self, family: &Family<Element>) -> Result<Element, DualityError> {
        let values = self.family_values(family).expect("finite family");
        Ok(values.iter().fold(FinModalAlgebra::top(self), |acc, &x| {
            FinModalAlgebra::meet(self, acc, x)
        }))
    }

    fn family_within(&self, family: &Family<Element>, filter: &AtomFilter) -> bool {
        self.family_values(family)
            .expect("finite family")
            .iter()
            .all(|x| self.contains(filter, x))
    }

    /// Decided by enumerating the carrier: every `x` with `□x ∈ F` must lie in `G`.
    fn box_preimage_within(&self, f: &AtomFilter, g: &AtomFilter) -> bool {
        assert!(
            self.atom_count() <= MAX_ENUMERATED_ATOMS,
            "carrier too large to enumerate"
        );
        self.elements()
            .all(|x| !self.contains(f, &self.box_unchecked(x)) || self.contains(g, &x))
    }
}

/// Prime filter of the `ω+1` algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaFilter {
    /// `{X | p ∈ X}`
    Principal(Point),
    /// `{X | X ∩ ω cofinite}`
    NonPrincipal,
}

impl fmt::Display for OmegaFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaFilter::Principal(p) => write!(f, "^{p}"),
            OmegaFilter::NonPrincipal => write!(f, "cofinite"),
        }
    }
}

/// The `ω+1` algebra seen through the principal filters at `0 … window-1`
/// and `ω`, plus the non-principal ultrafilter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaWindow {
    pub window: u64,
}

impl OmegaWindow {
    pub fn new(window: u64) -> OmegaWindow {
        OmegaWindow { window }
    }

    /// Index after which every value of a family of depth ≥ 1 is constant.
    ///
    /// With `k` the least natural missing from `z_1`, `z_1 ∨ ◊ⁿ1` misses `k`
    /// for every `n > k`, so `□(z_1 ∨ ◊ⁿ1) = {0, …, k}` from there on. If `z_1`
    /// contains every natural the first wrapper is already constant `1`.
    fn stabilization(&self, family: &Family<CofinElement>) -> Option<u64> {
        let inner = family.wrappers.first()?;
        Some(inner.least_missing_natural().map_or(0, |k| k + 1))
    }
}

impl FilterSpace for OmegaWindow {
    type Elem = CofinElement;
    type Filter = OmegaFilter;

    fn top(&self) -> CofinElement {
        CofinElement::top()
    }

    fn bottom(&self) -> CofinElement {
        CofinElement::bottom()
    }

    fn meet(&self, x: &CofinElement, y: &CofinElement) -> CofinElement {
        x.meet(y)
    }

    fn join(&self, x: &CofinElement, y: &CofinElement) -> CofinElement {
        x.join(y)
    }

    fn complement(&self, x: &CofinElement) -> CofinElement {
        x.complement()
    }

    fn box_op(&self, x: &CofinElement) -> CofinElement {
        x.box_op()
    }

    fn diamond_power(&self, n: usize) -> CofinElement {
        OmegaPlusAlgebra.diamond_power(n as u64)
    }

    fn prime_filters(&self) -> Vec<OmegaFilter> {
        (0..self.window)
            .map(|n| OmegaFilter::Principal(Point::Nat(n)))
            .chain([
                OmegaFilter::Principal(Point::Omega),
                OmegaFilter::NonPrincipal,
            ])
            .collect()
    }

    fn contains(&self, filter: &OmegaFilter, x: &CofinElement) -> bool {
        match filter {
            OmegaFilter::Principal(p) => x.contains(*p),
            OmegaFilter::NonPrincipal => x.cofinite_base,
        }
    }

    fn family_values(&self, family: &Family<CofinElement>) -> Option<Vec<CofinElement>> {
        let stable = self.stabilization(family)?;
        let values: BTreeSet<CofinElement> = (0..=stable)
            .map(|n| self.apply_wrappers(&family.wrappers, self.diamond_power(n as usize)))
            .collect();
        Some(values.into_iter().collect())
    }

    fn family_meet(&self, family: &Family<CofinElement>) -> Result<CofinElement, DualityError> {
        match self.family_values(family) {
            None => Ok(OmegaPlusAlgebra.chain_meet()),
            Some(values) => Ok(values
                .iter()
                .fold(CofinElement::top(), |acc, x| acc.meet(x))),
        }
    }

    fn family_within(&self, family: &Family<CofinElement>, filter: &OmegaFilter) -> bool {
        match self.family_values(family) {
            Some(values) => values.iter().all(|x| self.contains(filter, x)),
            // Every ◊ⁿ1 = [n, ω] is cofinite; a principal filter at p holds
            // them all exactly when p = ω.
            None => match filter {
                OmegaFilter::Principal(p) => *p == Point::Omega,
                OmegaFilter::NonPrincipal => true,
            },
        }
    }

    /// `□⁻¹F` is the principal filter generated by the set of `R`-successors
    /// of `F`'s point (all naturals for `ω` and for the non-principal filter,
    /// whose `□`-preimage consists of the sets containing every natural).
    fn box_preimage_within(&self, f: &OmegaFilter, g: &OmegaFilter) -> bool {
        let generator = match f {
            OmegaFilter::Principal(Point::Nat(n)) => CofinElement::initial_segment(*n),
            OmegaFilter::Principal(Point::Omega) | OmegaFilter::NonPrincipal => {
                CofinElement::cofinite([], false)
            }
        };
        self.contains(g, &generator)
    }
}

pub fn prime_filters<S: FilterSpace>(space: &S) -> Vec<S::Filter> {
    space.prime_filters()
}

/// Builds `Q₀, …, Q_depth` with `z` ranging over `generators`, dropping
/// families whose value sets coincide.
pub fn build_qset<S: FilterSpace>(
    space: &S,
    depth: usize,
    generators: &[S::Elem],
    max_families: usize,
) -> Result<QSet<S::Elem>, DualityError> {
    let mut seen: BTreeSet<Option<Vec<S::Elem>>> = BTreeSet::new();
    let first = Family::diamond_chain();
    seen.insert(space.family_values(&first));
    let mut levels = vec![vec![first]];
    let mut total = 1;
    for _ in 0..depth {
        let mut next = Vec::new();
        for family in levels.last().expect("Q₀ present") {
            for z in generators {
                let mut wrappers = family.wrappers.clone();
                wrappers.push(z.clone());
                let candidate = Family { wrappers };
                if seen.insert(space.family_values(&candidate)) {
                    total += 1;
                    if total > max_families {
                        return Err(DualityError::TooManyFamilies(total, max_families));
                    }
                    next.push(candidate);
                }
            }
        }
        levels.push(next);
    }
    Ok(QSet { levels })
}

/// Prime filters `F` such that `X ⊆ F ⇒ ⋀X ∈ F` for every `X ∈ q`.
pub fn q_filters<S: FilterSpace>(
    space: &S,
    q: &QSet<S::Elem>,
) -> Result<Vec<S::Filter>, DualityError> {
    let meets: Vec<(&Family<S::Elem>, S::Elem)> = q
        .families()
        .map(|fam| Ok((fam, space.family_meet(fam)?)))
        .collect::<Result<_, DualityError>>()?;
    Ok(space
        .prime_filters()
        .into_iter()
        .filter(|f| {
            meets
                .iter()
                .all(|(fam, meet)| !space.family_within(fam, f) || space.contains(f, meet))
        })
        .collect())
}

/// `Frm_Q(A)`: the Q-filters with `(F, G) ∈ R_Q ⇔ □⁻¹F ⊆ G`.
pub fn dual_frame<S: FilterSpace>(space: &S, filters: &[S::Filter]) -> Result<Frame, DualityError> {
    let names = filters.iter().map(|f| f.to_string()).collect();
    let mut edges = Vec::new();
    for (i, f) in filters.iter().enumerate() {
        for (j, g) in filters.iter().enumerate() {
            if space.box_preimage_within(f, g) {
                edges.push((i, j));
            }
        }
    }
    Ok(Frame::new(names, edges)?)
}

/// `η(x) = {F | x ∈ F}`, as a set of indices into `filters`.
pub fn eta<S: FilterSpace>(space: &S, filters: &[S::Filter], x: &S::Elem) -> WorldSet {
    filters
        .iter()
        .enumerate()
        .filter(|(_, f)| space.contains(f, x))
        .map(|(i, _)| i)
        .collect()
}

/// Properties of `η: A → Alg(Frm_Q(A))` checked over the whole carrier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub injective: bool,
    pub preserves_bounds: bool,
    pub preserves_meet: bool,
    pub preserves_join: bool,
    pub preserves_complement: bool,
    pub preserves_box: bool,
    /// `⋂ₙ η(◊ⁿ1) = ∅`; only meaningful when `⋀ₙ ◊ⁿ1 = 0`.
    pub chain_intersection_empty: Option<bool>,
}

impl EmbeddingReport {
    pub fn is_embedding(&self) -> bool {
        self.injective
            && self.preserves_bounds
            && self.preserves_meet
            && self.preserves_join
            && self.preserves_complement
            && self.preserves_box
            && self.chain_intersection_empty != Some(false)
    }
}

/// Checks that `η` is an embedding of modal algebras for a finite algebra.
pub fn check_embedding(
    algebra: &FinModalAlgebra,
    q: &QSet<Element>,
) -> Result<EmbeddingReport, DualityError> {
    if algebra.atom_count() > MAX_ENUMERATED_ATOMS {
        return Err(DualityError::CarrierTooLarge(algebra.atom_count()));
    }
    let filters = q_filters(algebra, q)?;
    let dual = dual_frame(algebra, &filters)?;
    let all = dual.worlds();
    let elems: Vec<Element> = algebra.elements().collect();
    let images: Vec<WorldSet> = elems.iter().map(|x| eta(algebra, &filters, x)).collect();
    let image_of = |x: Element| images[x.atoms().0 as usize];

    let distinct: BTreeSet<WorldSet> = images.iter().copied().collect();
    let injective = distinct.len() == images.len();
    let preserves_bounds = image_of(algebra.top()) == all && image_of(algebra.bottom()).is_empty();
    let mut preserves_meet = true;
    let mut preserves_join = true;
    for &x in &elems {
        for &y in &elems {
            preserves_meet &= image_of(algebra.meet(x, y)) == image_of(x).intersection(image_of(y));
            preserves_join &= image_of(algebra.join(x, y)) == image_of(x).union(image_of(y));
        }
    }
    let preserves_complement = elems
        .iter()
        .all(|&x| image_of(algebra.complement(x)) == all.difference(image_of(x)));
    let preserves_box = elems
        .iter()
        .all(|&x| image_of(algebra.box_unchecked(x)) == dual.box_set(image_of(x)));
    let chain = algebra.diamond_chain();
    let chain_intersection_empty = (chain.value == algebra.bottom()).then(|| {
        chain
            .chain
            .iter()
            .fold(all, |acc, &d| acc.intersection(image_of(d)))
            .is_empty()
    });
    Ok(EmbeddingReport {
        injective,
        preserves_bounds,
        preserves_meet,
        preserves_join,
        preserves_complement,
        preserves_box,
        chain_intersection_empty,
    })
}

/// A bijection `map` with `(a, b) ∈ R₁ ⇔ (map[a], map[b]) ∈ R₂`, if any.
pub fn find_isomorphism(a: &Frame, b: &Frame) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.edge_count() != b.edge_count() {
        return None;
    }
    let degree = |f: &Frame, w: usize| {
        (
            f.successors(w).len(),
            f.preimage(WorldSet::singleton(w)).len(),
            f.has_edge(w, w),
        )
    };
    let mut map = vec![usize::MAX; a.len()];
    let mut used = WorldSet::EMPTY;

    fn extend(
        a: &Frame,
        b: &Frame,
        w: usize,
        map: &mut Vec<usize>,
        used: &mut WorldSet,
        degree: &dyn Fn(&Frame, usize) -> (usize, usize, bool),
    ) -> bool {
        if w == a.len() {
            return true;
        }
        for cand in 0..b.len() {
            if used.contains(cand) || degree(a, w) != degree(b, cand) {
                continue;
            }
            let consistent = (0..w).all(|u| {
                a.has_edge(w, u) == b.has_edge(cand, map[u])
                    && a.has_edge(u, w) == b.has_edge(map[u], cand)
            }) && a.has_edge(w, w) == b.has_edge(cand, cand);
            if !consistent {
                continue;
            }
            map[w] = cand;
            used.insert(cand);
            if extend(a, b, w + 1, map, used, degree) {
                return true;
            }
            used.remove(cand);
        }
        false
    }

    extend(a, b, 0, &mut map, &mut used, &degree).then_some(map)
}

/// Summary of the windowed `ω+1` duality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaDualitySummary {
    pub window: u64,
    pub prime_filters: Vec<OmegaFilter>,
    pub q_filters: Vec<OmegaFilter>,
    pub excluded: Vec<OmegaFilter>,
    /// Names of the dual frame's worlds in filter order and its edges.
    pub dual_edges: Vec<(String, String)>,
    /// `⋂ₙ η(◊ⁿ1)` over the Q-filters, for `n ≤ window`.
    pub chain_intersection: Vec<OmegaFilter>,
}

pub fn omega_duality(window: u64) -> Result<OmegaDualitySummary, DualityError> {
    let space = OmegaWindow::new(window);
    let primes = space.prime_filters();
    let qf = q_filters(&space, &QSet::q0())?;
    let excluded = primes.iter().filter(|f| !qf.contains(f)).copied().collect();
    let dual = dual_frame(&space, &qf)?;
    let dual_edges = dual
        .edges()
        .map(|(a, b)| (dual.name(a).to_string(), dual.name(b).to_string()))
        .collect();
    let inter = (0..=window as usize).fold(dual.worlds(), |acc, n| {
        acc.intersection(eta(&space, &qf, &space.diamond_power(n)))
    });
    Ok(OmegaDualitySummary {
        window,
        prime_filters: primes,
        q_filters: qf.clone(),
        excluded,
        dual_edges,
        chain_intersection: inter.iter().map(|i| qf[i]).collect(),
    })
}

/// Names of worlds keyed by filter, for reports.
pub fn filter_names<F: fmt::Display>(filters: &[F]) -> BTreeMap<usize, String> {
    filters
        .iter()
        .enumerate()
        .map(|(i, f)| (i, f.to_string()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::{classify_frame, make_chain_desc};

    fn chain3() -> FinModalAlgebra {
        FinModalAlgebra::from_frame(make_chain_desc(3).unwrap())
    }

    #[test]
    fn prime_filter_examples() {
        assert_eq!(prime_filters(&chain3()).len(), 3);
        let one = FinModalAlgebra::from_frame(Frame::numbered(1, []).unwrap());
        let filters = prime_filters(&one);
        assert_eq!(filters.len(), 1);
        // The only filter of the two-element algebra is {1}.
        assert!(one.contains(&filters[0], &FinModalAlgebra::top(&one)));
        assert!(!one.contains(&filters[0], &FinModalAlgebra::bottom(&one)));

        let omega = prime_filters(&OmegaWindow::new(5));
        let mut expected: Vec<OmegaFilter> = (0..5)
            .map(|n| OmegaFilter::Principal(Point::Nat(n)))
            .collect();
        expected.push(OmegaFilter::Principal(Point::Omega));
        expected.push(OmegaFilter::NonPrincipal);
        assert_eq!(omega, expected);
    }

    #[test]
    fn q_filter_examples() {
        let a = chain3();
        assert_eq!(q_filters(&a, &QSet::q0()).unwrap(), prime_filters(&a));
        assert_eq!(q_filters(&a, &QSet::empty()).unwrap(), prime_filters(&a));

        let w = OmegaWindow::new(6);
        let qf = q_filters(&w, &QSet::q0()).unwrap();
        assert!(!qf.contains(&OmegaFilter::NonPrincipal));
        assert_eq!(qf.len(), 7);
        // The non-principal filter holds every ◊ⁿ1 but not their meet {ω}.
        for n in 0..30 {
            assert!(w.contains(&OmegaFilter::NonPrincipal, &w.diamond_power(n)));
        }
        assert!(!w.contains(&OmegaFilter::NonPrincipal, &OmegaPlusAlgebra.chain_meet()));
        assert_eq!(q_filters(&w, &QSet::empty()).unwrap().len(), 8);
    }

    #[test]
    fn dual_frame_examples() {
        let a = chain3();
        let dual = dual_frame(&a, &q_filters(&a, &QSet::q0()).unwrap()).unwrap();
        assert!(find_isomorphism(&dual, a.frame()).is_some());

        let window = 5;
        let w = OmegaWindow::new(window);
        let dual = dual_frame(&w, &q_filters(&w, &QSet::q0()).unwrap()).unwrap();
        // ({0..N-1} ∪ {ω}, >), with ω as the largest point.
        let truncated = make_chain_desc(window as usize + 1).unwrap();
        assert!(find_isomorphism(&dual, &truncated).is_some());

        let point = FinModalAlgebra::from_frame(Frame::numbered(1, []).unwrap());
        let dual = dual_frame(&point, &prime_filters(&point)).unwrap();
        assert_eq!((dual.len(), dual.edge_count()), (1, 0));
    }

    #[test]
    fn eta_examples() {
        let a = chain3();
        let filters = q_filters(&a, &QSet::q0()).unwrap();
        assert_eq!(eta(&a, &filters, &FinModalAlgebra::top(&a)).len(), 3);
        assert!(eta(&a, &filters, &FinModalAlgebra::bottom(&a)).is_empty());

        let summary = omega_duality(8).unwrap();
        assert_eq!(
            summary.chain_intersection,
            vec![OmegaFilter::Principal(Point::Omega)]
        );
        assert_eq!(summary.excluded, vec![OmegaFilter::NonPrincipal]);
    }

    #[test]
    fn embedding_on_chain() {
        let report = check_embedding(&chain3(), &QSet::q0()).unwrap();
        assert!(report.is_embedding());
        assert_eq!(report.chain_intersection_empty, Some(true));
    }

    #[test]
    fn build_qset_examples() {
        let a = chain3();
        let q = build_qset(&a, 0, &[], 100).unwrap();
        assert_eq!(q, QSet::q0());

        let zero = FinModalAlgebra::bottom(&a);
        let q = build_qset(&a, 1, &[zero], 100).unwrap();
        assert_eq!(q.level_counts(), vec![1, 1]);
        let fam = &q.levels[1][0];
        let expected: BTreeSet<Element> = (0..4)
            .map(|n| a.box_unchecked(FinModalAlgebra::diamond_power(&a, n)))
            .collect();
        let got: BTreeSet<Element> = a.family_values(fam).unwrap().into_iter().collect();
        assert_eq!(got, expected);

        let gens: Vec<Element> = a.elements().collect();
        let q = build_qset(&a, 2, &gens, 10_000).unwrap();
        for fam in q.families() {
            assert!(a.family_meet(fam).is_ok());
        }
        assert!(matches!(
            build_qset(&a, 3, &gens, 3),
            Err(DualityError::TooManyFamilies(_, 3))
        ));
    }

    #[test]
    fn omega_families_of_depth_one_stabilize() {
        let w = OmegaWindow::new(4);
        let z = CofinElement::finite([0, 1, 2], false);
        let fam = Family {
            wrappers: vec![z.clone()],
        };
        // For n > 3, z ∨ ◊ⁿ1 misses 3, so the value is {0..3}.
        for n in 4..20 {
            let v = w.box_op(&w.join(&z, &w.diamond_power(n)));
            assert_eq!(v, CofinElement::initial_segment(4));
        }
        assert_eq!(
            w.family_meet(&fam).unwrap(),
            CofinElement::initial_segment(4)
        );
        let q = build_qset(&w, 2, &[z, CofinElement::top()], 100).unwrap();
        assert!(q.family_count() >= 2);
        assert!(q_filters(&w, &q).is_ok());
    }

    #[test]
    fn dual_frames_of_transitive_algebras_are_transitive() {
        let f = Frame::numbered(3, [(0, 1), (1, 2), (0, 2), (2, 2)]).unwrap();
        let a = FinModalAlgebra::from_frame(f);
        let dual = dual_frame(&a, &q_filters(&a, &QSet::q0()).unwrap()).unwrap();
        assert!(classify_frame(&dual).transitive);
    }

    #[test]
    fn isomorphism_detects_mismatch() {
        let a = Frame::numbered(3, [(0, 1), (1, 2)]).unwrap();
        let b = Frame::numbered(3, [(2, 1), (1, 0)]).unwrap();
        let c = Frame::numbered(3, [(0, 1), (0, 2)]).unwrap();
        assert!(find_isomorphism(&a, &b).is_some());
        assert!(find_isomorphism(&a, &c).is_none());
    }
}
