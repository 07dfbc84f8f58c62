//! Stratified spaces, constant-fiber maps, constructible functions and
//! relative classes over finite stratified bases.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AtomTable, K0Class};
use crate::ring::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub name: String,
    pub class: K0Class,
}

impl Stratum {
    pub fn new(name: &str, class: K0Class) -> Self {
        Stratum { name: name.to_string(), class }
    }
}

/// Finite disjoint union of locally closed strata with a closure order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedSpace {
    strata: Vec<Stratum>,
    /// `(a, b)`: stratum `a` lies in the closure of stratum `b`.
    closure: BTreeSet<(usize, usize)>,
}

impl StratifiedSpace {
    /// `closure` lists pairs `(a, b)` of stratum names meaning `a ⊂ cl(b)`;
    /// the relation must be acyclic.
    pub fn new(strata: Vec<Stratum>, closure: &[(&str, &str)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for s in &strata {
            if !seen.insert(s.name.as_str()) {
                return Err(Error::invalid(format!("duplicate stratum `{}`", s.name)));
            }
        }
        let mut space = StratifiedSpace { strata, closure: BTreeSet::new() };
        for (a, b) in closure {
            let pair = (space.index_of(a)?, space.index_of(b)?);
            if pair.0 == pair.1 {
                return Err(Error::invalid(format!("stratum `{a}` cannot lie in its own boundary")));
            }
            space.closure.insert(pair);
        }
        if space.has_cycle() {
            return Err(Error::invalid("closure relation is not a partial order"));
        }
        Ok(space)
    }

    /// A space with a single stratum.
    pub fn single(name: &str, class: K0Class) -> Self {
        StratifiedSpace { strata: vec![Stratum::new(name, class)], closure: BTreeSet::new() }
    }

    pub fn point() -> Self {
        Self::single("pt", K0Class::point())
    }

    fn has_cycle(&self) -> bool {
        // Kahn's algorithm on the closure graph.
        let n = self.strata.len();
        let mut indegree = vec![0usize; n];
        for (_, b) in &self.closure {
            indegree[*b] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|i| indegree[*i] == 0).collect();
        let mut visited = 0;
        while let Some(a) = ready.pop() {
            visited += 1;
            for (x, b) in &self.closure {
                if *x == a {
                    indegree[*b] -= 1;
                    if indegree[*b] == 0 {
                        ready.push(*b);
                    }
                }
            }
        }
        visited < n
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.strata
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| Error::invalid(format!("unknown stratum `{name}`")))
    }

    pub fn closure_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.closure.iter().map(|(a, b)| (self.strata[*a].name.as_str(), self.strata[*b].name.as_str()))
    }

    /// Class of the whole space, the sum over strata.
    pub fn class(&self) -> K0Class {
        self.strata.iter().fold(K0Class::zero(), |acc, s| acc + s.class.clone())
    }

    /// Product stratification `{a x b}` with the product order.
    pub fn product(&self, other: &Self) -> Self {
        let m = other.strata.len();
        let strata = self
            .strata
            .iter()
            .flat_map(|a| other.strata.iter().map(move |b| Stratum::new(&format!("{}×{}", a.name, b.name), &a.class * &b.class)))
            .collect();
        let mut closure = BTreeSet::new();
        for i in 0..self.strata.len() {
            for j in 0..m {
                for (a, b) in &self.closure {
                    if *a == i {
                        closure.insert((i * m + j, b * m + j));
                    }
                }
                for (a, b) in &other.closure {
                    if *a == j {
                        closure.insert((i * m + j, i * m + b));
                    }
                }
            }
        }
        StratifiedSpace { strata, closure }
    }
}

/// Map sending each source stratum onto one target stratum with constant
/// fiber class.
#[derive(Clone, Debug, PartialEq)]
pub struct StratifiedMap {
    source: Arc<StratifiedSpace>,
    target: Arc<StratifiedSpace>,
    assignment: Vec<(usize, K0Class)>,
}

impl StratifiedMap {
    /// `assignment` maps every source stratum name to a target stratum name
    /// and fiber class; `[S] = [T]·[F]` is checked for each.
    pub fn new(
        source: Arc<StratifiedSpace>,
        target: Arc<StratifiedSpace>,
        assignment: &[(&str, &str, K0Class)],
    ) -> Result<Self> {
        let mut slots: Vec<Option<(usize, K0Class)>> = vec![None; source.len()];
        for (s, t, fiber) in assignment {
            let i = source.index_of(s)?;
            let j = target.index_of(t)?;
            if slots[i].is_some() {
                return Err(Error::invalid(format!("stratum `{s}` is assigned twice")));
            }
            let expected = &target.strata[j].class * fiber;
            if source.strata[i].class != expected {
                return Err(Error::invalid(format!(
                    "stratum `{s}` has class {} but [{t}]·[fiber] = {expected}",
                    source.strata[i].class
                )));
            }
            slots[i] = Some((j, fiber.clone()));
        }
        let assignment = slots
            .into_iter()
            .enumerate()
            .map(|(i, slot)| slot.ok_or_else(|| Error::invalid(format!("stratum `{}` is not assigned", source.strata[i].name))))
            .collect::<Result<_>>()?;
        Ok(StratifiedMap { source, target, assignment })
    }

    pub fn identity(space: Arc<StratifiedSpace>) -> Self {
        let assignment = (0..space.len()).map(|i| (i, K0Class::point())).collect();
        StratifiedMap { source: space.clone(), target: space, assignment }
    }

    /// Map to the point with fibers the strata themselves.
    pub fn to_point(space: Arc<StratifiedSpace>) -> Self {
        let assignment = space.strata.iter().map(|s| (0, s.class.clone())).collect();
        StratifiedMap { source: space, target: Arc::new(StratifiedSpace::point()), assignment }
    }

    pub fn source(&self) -> &Arc<StratifiedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<StratifiedSpace> {
        &self.target
    }

    /// Target stratum index and fiber class of source stratum `i`.
    pub fn image(&self, i: usize) -> (usize, &K0Class) {
        let (j, f) = &self.assignment[i];
        (*j, f)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &StratifiedMap) -> Result<StratifiedMap> {
        if *self.target != *next.source {
            return Err(Error::invalid("maps are not composable: target and source differ"));
        }
        let assignment = self
            .assignment
            .iter()
            .map(|(j, f)| {
                let (k, g) = &next.assignment[*j];
                (*k, f * g)
            })
            .collect();
        Ok(StratifiedMap { source: self.source.clone(), target: next.target.clone(), assignment })
    }
}

/// Integer-valued function constant on strata.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructibleFunction {
    base: Arc<StratifiedSpace>,
    values: Vec<BigInt>,
}

impl ConstructibleFunction {
    pub fn new(base: Arc<StratifiedSpace>, values: Vec<BigInt>) -> Result<Self> {
        if values.len() != base.len() {
            return Err(Error::invalid(format!("{} values for {} strata", values.len(), base.len())));
        }
        Ok(ConstructibleFunction { base, values })
    }

    /// The characteristic function `1_X`.
    pub fn indicator(base: Arc<StratifiedSpace>) -> Self {
        let values = vec![BigInt::one(); base.len()];
        ConstructibleFunction { base, values }
    }

    pub fn base(&self) -> &Arc<StratifiedSpace> {
        &self.base
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn value(&self, stratum: &str) -> Result<&BigInt> {
        Ok(&self.values[self.base.index_of(stratum)?])
    }

    /// `χ(X; α) = Σ α(S) χ_c(S)`.
    pub fn euler_integral(&self, atoms: &AtomTable) -> Result<BigInt> {
        let mut acc = BigInt::zero();
        for (s, v) in self.base.strata.iter().zip(&self.values) {
            acc += v * atoms.euler(&s.class)?;
        }
        Ok(acc)
    }

    /// Sorted `(stratum, value)` pairs.
    pub fn named_values(&self) -> BTreeMap<&str, &BigInt> {
        self.base.strata.iter().map(|s| s.name.as_str()).zip(&self.values).collect()
    }
}

/// `f_*(α)(T) = Σ_{S -> T} α(S) χ(F_S)`.
pub fn pushforward_cf(atoms: &AtomTable, f: &StratifiedMap, alpha: &ConstructibleFunction) -> Result<ConstructibleFunction> {
    if *alpha.base != *f.source {
        return Err(Error::invalid("constructible function does not live on the source of the map"));
    }
    let mut values = vec![BigInt::zero(); f.target.len()];
    for (i, (j, fiber)) in f.assignment.iter().enumerate() {
        values[*j] += &alpha.values[i] * atoms.euler(fiber)?;
    }
    ConstructibleFunction::new(f.target.clone(), values)
}

/// Relative class `[Y -> X]` over a stratified base, recorded by the fiber
/// class `F_S` over each stratum `S` (so `[Y] = Σ [S]·F_S`).
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeClass {
    base: Arc<StratifiedSpace>,
    fibers: Vec<K0Class>,
}

impl RelativeClass {
    pub fn new(base: Arc<StratifiedSpace>, fibers: Vec<K0Class>) -> Result<Self> {
        if fibers.len() != base.len() {
            return Err(Error::invalid(format!("{} fibers for {} strata", fibers.len(), base.len())));
        }
        Ok(RelativeClass { base, fibers })
    }

    /// `[X -> X]`.
    pub fn unit(base: Arc<StratifiedSpace>) -> Self {
        let fibers = vec![K0Class::point(); base.len()];
        RelativeClass { base, fibers }
    }

    pub fn base(&self) -> &Arc<StratifiedSpace> {
        &self.base
    }

    pub fn fibers(&self) -> &[K0Class] {
        &self.fibers
    }

    /// Class of the total space, i.e. the pushforward to a point.
    pub fn total_class(&self) -> K0Class {
        self.base.strata.iter().zip(&self.fibers).fold(K0Class::zero(), |acc, (s, f)| acc + &s.class * f)
    }

    /// `f_*[Y -> X] = [Y -> X -> X']`.
    pub fn pushforward(&self, f: &StratifiedMap) -> Result<RelativeClass> {
        if *self.base != *f.source {
            return Err(Error::invalid("relative class does not live on the source of the map"));
        }
        let mut fibers = vec![K0Class::zero(); f.target.len()];
        for (i, (j, fiber)) in f.assignment.iter().enumerate() {
            fibers[*j] = &fibers[*j] + &(fiber * &self.fibers[i]);
        }
        RelativeClass::new(f.target.clone(), fibers)
    }

    /// Fiber product with `f: X' -> X`.
    pub fn pullback(&self, f: &StratifiedMap) -> Result<RelativeClass> {
        if *self.base != *f.target {
            return Err(Error::invalid("relative class does not live on the target of the map"));
        }
        let fibers = f.assignment.iter().map(|(j, _)| self.fibers[*j].clone()).collect();
        RelativeClass::new(f.source.clone(), fibers)
    }

    /// `[Y -> X] x [Y' -> X']` over `X x X'`.
    pub fn exterior_product(&self, other: &RelativeClass) -> RelativeClass {
        let base = Arc::new(self.base.product(&other.base));
        let fibers = self.fibers.iter().flat_map(|a| other.fibers.iter().map(move |b| a * b)).collect();
        RelativeClass { base, fibers }
    }

    /// The constructible function `S ↦ χ(F_S)`.
    pub fn epsilon(&self, atoms: &AtomTable) -> Result<ConstructibleFunction> {
        let values = self.fibers.iter().map(|f| atoms.euler(f)).collect::<Result<_>>()?;
        ConstructibleFunction::new(self.base.clone(), values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> K0Class {
        K0Class::lefschetz()
    }

    fn pt() -> K0Class {
        K0Class::point()
    }

    /// `P^1 = pt ∪ ℂ`.
    fn line() -> Arc<StratifiedSpace> {
        Arc::new(StratifiedSpace::new(vec![Stratum::new("pt", pt()), Stratum::new("C", l())], &[("pt", "C")]).unwrap())
    }

    #[test]
    fn constant_map_from_line() {
        let atoms = AtomTable::new();
        let f = StratifiedMap::to_point(line());
        let out = pushforward_cf(&atoms, &f, &ConstructibleFunction::indicator(line())).unwrap();
        assert_eq!(out.values(), &[BigInt::from(2)]);
    }

    #[test]
    fn projection_of_product() {
        let atoms = AtomTable::new();
        let base = line();
        let total = Arc::new(base.product(&base));
        let assignment: Vec<(String, String, K0Class)> = total
            .strata()
            .iter()
            .map(|s| {
                let (a, b) = s.name.split_once('×').unwrap();
                let fiber = base.strata()[base.index_of(b).unwrap()].class.clone();
                (s.name.clone(), a.to_string(), fiber)
            })
            .collect();
        let refs: Vec<(&str, &str, K0Class)> = assignment.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.clone())).collect();
        let proj = StratifiedMap::new(total.clone(), base.clone(), &refs).unwrap();
        let out = pushforward_cf(&atoms, &proj, &ConstructibleFunction::indicator(total)).unwrap();
        assert_eq!(out.values(), &[BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn identity_and_validation() {
        let atoms = AtomTable::new();
        let alpha = ConstructibleFunction::new(line(), vec![BigInt::from(3), BigInt::from(-1)]).unwrap();
        let id = StratifiedMap::identity(line());
        assert_eq!(pushforward_cf(&atoms, &id, &alpha).unwrap(), alpha);
        let bad = StratifiedMap::new(line(), Arc::new(StratifiedSpace::point()), &[("pt", "pt", pt()), ("C", "pt", pt())]);
        assert!(bad.is_err());
        let cyclic = StratifiedSpace::new(vec![Stratum::new("a", pt()), Stratum::new("b", pt())], &[("a", "b"), ("b", "a")]);
        assert!(cyclic.is_err());
    }

    #[test]
    fn relative_classes() {
        let atoms = AtomTable::new();
        let unit = RelativeClass::unit(line());
        assert_eq!(unit.epsilon(&atoms).unwrap(), ConstructibleFunction::indicator(line()));
        let id = StratifiedMap::identity(line());
        assert_eq!(unit.pullback(&id).unwrap(), unit);
        let f = StratifiedMap::to_point(line());
        let pushed = unit.pushforward(&f).unwrap();
        assert_eq!(pushed.fibers(), &[K0Class::projective(1)]);
        assert_eq!(
            pushed.epsilon(&atoms).unwrap(),
            pushforward_cf(&atoms, &f, &unit.epsilon(&atoms).unwrap()).unwrap()
        );
        let square = unit.exterior_product(&unit);
        assert_eq!(square, RelativeClass::unit(Arc::new(line().product(&line()))));
        assert_eq!(square.total_class(), K0Class::projective(1).pow(2));
    }
}
