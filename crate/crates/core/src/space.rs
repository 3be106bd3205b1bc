//! Finite atomic probability spaces and their events.
//!
//! Every subset of atoms is measurable, so an [`Event`] is just a sorted set
//! of atom indices. Atoms carry strictly positive mass, which means the only
//! null event is the empty one.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::error::{L0Error, Result};
use crate::rational::{self, Rational};
use crate::scalar::Scalar;

#[derive(Debug, PartialEq, Eq)]
struct SpaceData {
    ids: Vec<String>,
    probs: Vec<Rational>,
}

/// `(Ω, 2^Ω, P)` on finitely many atoms.
///
/// Cheap to clone; clones share storage. Two spaces compare equal when they
/// have the same atom ids and masses in the same order.
#[derive(Clone)]
pub struct ProbSpace(Arc<SpaceData>);

impl PartialEq for ProbSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for ProbSpace {}

impl fmt::Debug for ProbSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (id, p) in self.0.ids.iter().zip(&self.0.probs) {
            m.entry(id, &rational::format(p));
        }
        m.finish()
    }
}

impl ProbSpace {
    /// Builds a space with canonical atom ids `a1..am`.
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        let ids = (1..=probs.len()).map(|i| format!("a{i}")).collect();
        Self::with_ids(ids, probs)
    }

    pub fn with_ids(ids: Vec<String>, probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(L0Error::EmptySpace);
        }
        if ids.len() != probs.len() {
            return Err(L0Error::Malformed(format!(
                "{} atom ids for {} masses",
                ids.len(),
                probs.len()
            )));
        }
        let mut seen = HashSet::new();
        for id in &ids {
            if !seen.insert(id.as_str()) {
                return Err(L0Error::DuplicateAtom(id.clone()));
            }
        }
        for (id, p) in ids.iter().zip(&probs) {
            if !p.is_positive() {
                return Err(L0Error::NonPositiveMass {
                    atom: id.clone(),
                    mass: rational::format(p),
                });
            }
        }
        let sum: Rational = probs.iter().sum();
        if !sum.is_one() {
            return Err(L0Error::MassNotOne {
                sum: rational::format(&sum),
            });
        }
        Ok(Self(Arc::new(SpaceData { ids, probs })))
    }

    /// The one-atom (deterministic) space.
    pub fn trivial() -> Self {
        Self::new(vec![Rational::one()]).expect("valid")
    }

    /// `m` atoms of equal mass `1/m`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(L0Error::EmptySpace);
        }
        Self::new(vec![rational::ratio(1, m as i64); m])
    }

    pub fn len(&self) -> usize {
        self.0.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ids(&self) -> &[String] {
        &self.0.ids
    }

    pub fn id(&self, atom: usize) -> &str {
        &self.0.ids[atom]
    }

    pub fn probs(&self) -> &[Rational] {
        &self.0.probs
    }

    pub fn mass(&self, atom: usize) -> &Rational {
        &self.0.probs[atom]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.0
            .ids
            .iter()
            .position(|a| a == id)
            .ok_or_else(|| L0Error::UnknownAtom(id.to_string()))
    }

    pub fn ensure_same(&self, other: &ProbSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(L0Error::SpaceMismatch)
        }
    }

    pub fn omega(&self) -> Event {
        Event::new(self, 0..self.len()).expect("in range")
    }

    pub fn empty_event(&self) -> Event {
        Event::new(self, std::iter::empty()).expect("in range")
    }

    pub fn singleton(&self, atom: usize) -> Event {
        Event::new(self, [atom]).expect("atom index out of range")
    }

    /// Every one of the `2^m` events, in bitmask order.
    ///
    /// Panics for spaces with more than 63 atoms.
    pub fn all_events(&self) -> impl Iterator<Item = Event> + '_ {
        let m = self.len();
        assert!(m < 64, "cannot enumerate events of a {m}-atom space");
        (0u64..(1u64 << m)).map(move |mask| {
            Event::new(self, (0..m).filter(|i| mask >> i & 1 == 1)).expect("in range")
        })
    }

    /// `P(A)`.
    pub fn prob(&self, event: &Event) -> Result<Rational> {
        self.ensure_same(&event.space)
            .map_err(|_| L0Error::ForeignEvent)?;
        Ok(event.members.iter().map(|&i| &self.0.probs[i]).sum())
    }

    /// The indicator idempotent `Ĩ_A`.
    pub fn indicator(&self, event: &Event) -> Result<Scalar> {
        self.ensure_same(&event.space)
            .map_err(|_| L0Error::ForeignEvent)?;
        Ok(event.indicator())
    }
}

/// A measurable set `A ⊆ Ω`, stored as sorted atom indices.
#[derive(Clone, PartialEq, Eq)]
pub struct Event {
    space: ProbSpace,
    members: BTreeSet<usize>,
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.members.iter().map(|&i| self.space.id(i)))
            .finish()
    }
}

impl Event {
    pub fn new(space: &ProbSpace, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if members.iter().any(|&i| i >= space.len()) {
            return Err(L0Error::ForeignEvent);
        }
        Ok(Self {
            space: space.clone(),
            members,
        })
    }

    pub fn from_ids<S: AsRef<str>>(space: &ProbSpace, ids: &[S]) -> Result<Self> {
        let members = ids
            .iter()
            .map(|id| {
                space
                    .index_of(id.as_ref())
                    .map_err(|_| L0Error::ForeignEvent)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, members)
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn member_ids(&self) -> Vec<String> {
        self.members
            .iter()
            .map(|&i| self.space.id(i).to_string())
            .collect()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.members.contains(&atom)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_omega(&self) -> bool {
        self.members.len() == self.space.len()
    }

    pub fn prob(&self) -> Rational {
        self.members.iter().map(|&i| self.space.mass(i)).sum()
    }

    /// `P(A) > 0`, i.e. `A ∈ F₊`.
    pub fn is_positive(&self) -> bool {
        !self.prob().is_zero()
    }

    pub fn complement(&self) -> Event {
        Self {
            space: self.space.clone(),
            members: (0..self.space.len())
                .filter(|i| !self.members.contains(i))
                .collect(),
        }
    }

    pub fn union(&self, other: &Event) -> Result<Event> {
        self.space.ensure_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            members: self.members.union(&other.members).copied().collect(),
        })
    }

    pub fn intersection(&self, other: &Event) -> Result<Event> {
        self.space.ensure_same(&other.space)?;
        Ok(Self {
            space: self.space.clone(),
            members: self.members.intersection(&other.members).copied().collect(),
        })
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn indicator(&self) -> Scalar {
        Scalar::from_fn(&self.space, |i| {
            if self.members.contains(&i) {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn s2() -> ProbSpace {
        ProbSpace::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap()
    }

    #[test]
    fn make_space_examples() {
        let one = ProbSpace::new(vec![int(1)]).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.ids(), ["a1"]);

        let s = s2();
        assert_eq!(s.ids(), ["a1", "a2"]);
        assert_eq!(s.probs().iter().sum::<Rational>(), int(1));

        assert_eq!(
            ProbSpace::new(vec![ratio(1, 2), ratio(1, 3), ratio(1, 4)]),
            Err(L0Error::MassNotOne {
                sum: "13/12".into()
            })
        );
    }

    #[test]
    fn make_space_errors() {
        assert_eq!(ProbSpace::new(vec![]), Err(L0Error::EmptySpace));
        assert!(matches!(
            ProbSpace::new(vec![int(1), int(0)]),
            Err(L0Error::NonPositiveMass { .. })
        ));
        assert!(matches!(
            ProbSpace::new(vec![int(2), int(-1)]),
            Err(L0Error::NonPositiveMass { .. })
        ));
        assert_eq!(
            ProbSpace::with_ids(vec!["u".into(), "u".into()], vec![ratio(1, 2), ratio(1, 2)]),
            Err(L0Error::DuplicateAtom("u".into()))
        );
    }

    #[test]
    fn prob_examples() {
        let s = s2();
        assert_eq!(s.prob(&s.omega()).unwrap(), int(1));
        assert_eq!(s.prob(&s.singleton(0)).unwrap(), ratio(1, 2));
        assert_eq!(s.prob(&s.empty_event()).unwrap(), int(0));

        let other = ProbSpace::uniform(3).unwrap();
        assert_eq!(s.prob(&other.omega()), Err(L0Error::ForeignEvent));
        assert_eq!(s.indicator(&other.omega()), Err(L0Error::ForeignEvent));
    }

    #[test]
    fn indicator_examples() {
        let s = s2();
        assert_eq!(s.indicator(&s.omega()).unwrap(), Scalar::one(&s));
        assert_eq!(s.indicator(&s.empty_event()).unwrap(), Scalar::zero(&s));
        let a2 = Event::from_ids(&s, &["a2"]).unwrap();
        assert_eq!(a2.indicator().values(), [int(0), int(1)]);
    }

    #[test]
    fn event_algebra() {
        let s = ProbSpace::uniform(4).unwrap();
        for a in s.all_events() {
            assert_eq!(a.complement().complement(), a);
            let ind = a.indicator();
            assert_eq!(&ind * &ind, ind);
            assert_eq!(&ind + &a.complement().indicator(), Scalar::one(&s));
            for b in s.all_events() {
                if a.intersection(&b).unwrap().is_empty() {
                    assert_eq!(a.union(&b).unwrap().prob(), a.prob() + b.prob());
                }
            }
        }
        assert_eq!(s.all_events().count(), 16);
    }

    #[test]
    fn foreign_ids_rejected() {
        let s = s2();
        assert_eq!(Event::from_ids(&s, &["a3"]), Err(L0Error::ForeignEvent));
        assert_eq!(Event::new(&s, [5]), Err(L0Error::ForeignEvent));
    }
}
