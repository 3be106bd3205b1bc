//! Seeded random maps and fuzz campaigns over them.
//!
//! Trial `i` of a campaign draws everything from stream `i` of the campaign
//! seed, so a trial can be replayed alone from `(seed, i)` and its data does
//! not depend on how many trials run.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::certifier::{
    certify_affine, check_segment_preservation, Certification, FailureWitness, Hypothesis,
};
use crate::linalg::Matrix;
use crate::maps::{
    check_line_preservation, is_local, AffineMap, AtomPermutation, BlackBoxMap, Exponents,
    LinePreservationReport, MapSpec, PerAtomMap, Piece, SemilinearMap,
};
use crate::probes::{rng_for, ProbeBudget, SeededRng};
use crate::rational::{self, Rational};
use crate::space::ProbSpace;
use crate::vector::Vector;
use crate::wire;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Profile {
    /// Invertible affine maps; every trial must certify to its parameters.
    Affine,
    /// Semilinear maps whose permutation moves an atom with a nonzero
    /// matrix; every trial must fail locality.
    SemilinearNontrivial,
    /// Bijective per-atom maps; affine ones must certify, the rest must not.
    PerAtom,
    /// Maps with one injected defect; the witness must name it.
    Corrupted,
    /// Non-local bijections checked for segment and line preservation.
    /// Records findings only.
    SegmentExploration,
}

impl Profile {
    pub const ALL: [Profile; 5] = [
        Profile::Affine,
        Profile::SemilinearNontrivial,
        Profile::PerAtom,
        Profile::Corrupted,
        Profile::SegmentExploration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Affine => "affine",
            Profile::SemilinearNontrivial => "semilinear-nontrivial",
            Profile::PerAtom => "peratom",
            Profile::Corrupted => "corrupted",
            Profile::SegmentExploration => "remark-3.8",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Profile::ALL.iter().map(|p| p.name()).collect();
                format!(
                    "unknown profile \"{s}\" (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

// ---- generators

/// Between `min` and `max` atoms with masses proportional to weights in 1..=4.
pub fn random_space(rng: &mut SeededRng, min: usize, max: usize) -> ProbSpace {
    let m = rng.random_range(min..=max);
    let weights: Vec<i64> = (0..m).map(|_| rng.random_range(1..=4)).collect();
    space_from_weights(&weights)
}

fn space_from_weights(weights: &[i64]) -> ProbSpace {
    let total: i64 = weights.iter().sum();
    ProbSpace::new(weights.iter().map(|&w| rational::ratio(w, total)).collect())
        .expect("positive weights")
}

/// A space of at most `max` atoms with a mass-preserving involution that
/// swaps at least one pair.
pub fn random_paired_space(rng: &mut SeededRng, max: usize) -> (ProbSpace, Vec<usize>) {
    let pairs = rng.random_range(1..=max / 2);
    let fixed = rng.random_range(0..=max - 2 * pairs);
    let m = 2 * pairs + fixed;
    let mut slots: Vec<usize> = (0..m).collect();
    slots.shuffle(rng);
    let mut weights = vec![0; m];
    let mut images: Vec<usize> = (0..m).collect();
    for p in 0..pairs {
        let (a, b) = (slots[2 * p], slots[2 * p + 1]);
        let w = rng.random_range(1..=4);
        weights[a] = w;
        weights[b] = w;
        images[a] = b;
        images[b] = a;
    }
    for &a in &slots[2 * pairs..] {
        weights[a] = rng.random_range(1..=4);
    }
    (space_from_weights(&weights), images)
}

fn entry(rng: &mut SeededRng) -> Rational {
    if rng.random_bool(0.2) {
        rational::ratio(rng.random_range(-3..=3), 2)
    } else {
        rational::int(rng.random_range(-3..=3))
    }
}

pub fn random_invertible_matrix(rng: &mut SeededRng, n: usize) -> Matrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| entry(rng)).collect())
            .collect();
        let m = Matrix::from_rows(rows).expect("square");
        if !num::Zero::is_zero(&m.determinant()) {
            return m;
        }
    }
}

/// A nonzero matrix of rank `n − 1`.
pub fn random_singular_matrix(rng: &mut SeededRng, n: usize) -> Matrix {
    let m = random_invertible_matrix(rng, n);
    let mut rows = m.to_rows();
    // replace the last row by a combination of the others
    let c = entry(rng);
    rows[n - 1] = rows[0].iter().map(|v| v * &c).collect();
    Matrix::from_rows(rows).expect("square")
}

fn random_point(rng: &mut SeededRng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| entry(rng)).collect()
}

pub fn random_invertible_affine(rng: &mut SeededRng, space: &ProbSpace, dim: usize) -> AffineMap {
    let matrices = (0..space.len())
        .map(|_| random_invertible_matrix(rng, dim))
        .collect();
    let offset = Vector::from_fn(space, dim, |_| random_point(rng, dim));
    AffineMap::new(matrices, offset).expect("shapes agree")
}

/// A semilinear map with a nontrivial involution and invertible matrices,
/// hence bijective and never local.
pub fn random_nonlocal_semilinear(rng: &mut SeededRng, max_atoms: usize, dim: usize) -> MapSpec {
    let (space, images) = random_paired_space(rng, max_atoms);
    let sigma = AtomPermutation::new(&space, images).expect("pairing preserves mass");
    let affine = random_invertible_affine(rng, &space, dim);
    MapSpec::Semilinear(SemilinearMap::new(sigma, affine).expect("same space"))
}

fn random_odd_exponent(rng: &mut SeededRng) -> u32 {
    [1, 3, 5][rng.random_range(0..3)]
}

/// An injective piece from the catalog.
pub fn random_bijective_piece(rng: &mut SeededRng, dim: usize) -> Piece {
    let affine = |rng: &mut SeededRng| Piece::Affine {
        matrix: random_invertible_matrix(rng, dim),
        offset: random_point(rng, dim),
    };
    match rng.random_range(0..6) {
        0 => Piece::Identity,
        1 => Piece::Translate(random_point(rng, dim)),
        2 => affine(rng),
        3 => Piece::Power(Exponents::Uniform(random_odd_exponent(rng))),
        4 => Piece::Power(Exponents::PerCoord(
            (0..dim).map(|_| random_odd_exponent(rng)).collect(),
        )),
        _ => Piece::Compose(vec![
            affine(rng),
            Piece::cube(),
            Piece::Translate(random_point(rng, dim)),
        ]),
    }
}

pub fn random_bijective_peratom(rng: &mut SeededRng, space: &ProbSpace, dim: usize) -> PerAtomMap {
    let pieces = (0..space.len())
        .map(|_| random_bijective_piece(rng, dim))
        .collect();
    PerAtomMap::new(space, dim, pieces).expect("catalog pieces fit")
}

/// `T(x)(to) += M x(from)`: the base map plus a leak between atoms. For
/// `from ≠ to` and `M ≠ 0` the result is not local.
pub fn leaky_black_box(base: &MapSpec, from: usize, to: usize, leak: Matrix) -> MapSpec {
    let inner = base.clone();
    let dim = base.dim();
    MapSpec::BlackBox(BlackBoxMap::new(base.space(), dim, "leaky", move |x| {
        let y = inner.apply(x);
        let extra = leak.mul_vec(x.point(from));
        y.map_points(dim, |a, p| {
            if a == to {
                p.iter().zip(&extra).map(|(u, v)| u + v).collect()
            } else {
                p.to_vec()
            }
        })
    }))
}

/// A map violating exactly `defect` among locality, injectivity, and
/// forward line preservation.
pub fn corrupted_map(
    rng: &mut SeededRng,
    defect: Hypothesis,
    max_atoms: usize,
    dim: usize,
) -> MapSpec {
    match defect {
        Hypothesis::Locality => random_nonlocal_semilinear(rng, max_atoms, dim),
        Hypothesis::Injectivity => {
            let space = random_space(rng, 2, max_atoms);
            let mut matrices: Vec<Matrix> = (0..space.len())
                .map(|_| random_invertible_matrix(rng, dim))
                .collect();
            let bad = rng.random_range(0..space.len());
            matrices[bad] = random_singular_matrix(rng, dim);
            let offset = Vector::from_fn(&space, dim, |_| random_point(rng, dim));
            MapSpec::Affine(AffineMap::new(matrices, offset).expect("shapes agree"))
        }
        Hypothesis::LineForward => {
            let space = random_space(rng, 2, max_atoms);
            let mut pieces: Vec<Piece> = (0..space.len())
                .map(|_| Piece::Affine {
                    matrix: random_invertible_matrix(rng, dim),
                    offset: random_point(rng, dim),
                })
                .collect();
            let bad = rng.random_range(0..space.len());
            pieces[bad] = Piece::cube();
            MapSpec::PerAtom(PerAtomMap::new(&space, dim, pieces).expect("catalog pieces fit"))
        }
        other => panic!("no generator injects a {} defect", other.name()),
    }
}

const DEFECTS: [Hypothesis; 3] = [
    Hypothesis::Locality,
    Hypothesis::Injectivity,
    Hypothesis::LineForward,
];

// ---- campaigns

#[derive(Debug, Clone)]
pub enum TrialOutcome {
    Certification(Certification),
    Exploration {
        local: bool,
        segment: Option<Box<FailureWitness>>,
        lines: LinePreservationReport,
    },
}

#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub index: usize,
    /// Seed handed to the checks of this trial.
    pub trial_seed: u64,
    pub map: MapSpec,
    /// Generator parameters, as reported.
    pub params: Value,
    pub outcome: TrialOutcome,
    /// Why the outcome contradicts the profile's guarantee, if it does.
    pub surprise: Option<String>,
}

impl TrialRecord {
    pub fn witness(&self) -> Option<&FailureWitness> {
        match &self.outcome {
            TrialOutcome::Certification(c) => c.witness(),
            TrialOutcome::Exploration { .. } => None,
        }
    }

    /// A non-local map that preserved every sampled segment.
    pub fn is_finding(&self) -> bool {
        matches!(
            &self.outcome,
            TrialOutcome::Exploration {
                local: false,
                segment: None,
                ..
            }
        )
    }

    pub fn to_json(&self) -> Value {
        let space = self.map.space();
        let mut v = json!({
            "trial": self.index,
            "trial_seed": self.trial_seed,
            "kind": self.map.kind(),
            "params": self.params,
            "space": wire::space_to_json(space),
            "map": wire::map_to_json(&self.map).unwrap_or(Value::Null),
            "surprise": self.surprise,
        });
        match &self.outcome {
            TrialOutcome::Certification(Certification::Certified(c)) => {
                v["verdict"] = json!("certified");
                v["A"] = wire::certificate_to_json(c)["A"].clone();
                v["b"] = wire::vector_to_json(c.affine.offset());
            }
            TrialOutcome::Certification(Certification::Failed(w)) => {
                v["verdict"] = json!("witness");
                v["witness"] = wire::failure_witness_to_json(w, space);
            }
            TrialOutcome::Exploration {
                local,
                segment,
                lines,
            } => {
                v["verdict"] = json!("explored");
                v["local"] = json!(local);
                v["segment_preserving"] = json!(segment.is_none());
                v["segment_witness"] = segment
                    .as_ref()
                    .map_or(Value::Null, |w| wire::failure_witness_to_json(w, space));
                v["lines"] = wire::line_report_to_json(lines);
                v["finding"] = json!(self.is_finding());
            }
        }
        v
    }
}

fn certification_surprise(map: &MapSpec, out: &Certification, expect: &Expect) -> Option<String> {
    if let Some(w) = out.witness() {
        if !w.reproduces(map) {
            return Some(format!(
                "{} witness does not reproduce",
                w.hypothesis().name()
            ));
        }
    }
    match (expect, out) {
        (Expect::Certificate(a), Certification::Certified(c)) if c.affine == *a => None,
        (Expect::Certificate(_), Certification::Certified(_)) => {
            Some("certificate differs from the generating parameters".into())
        }
        (Expect::Certificate(_), Certification::Failed(w)) => Some(format!(
            "expected a certificate, got a {} witness",
            w.hypothesis().name()
        )),
        (Expect::Witness(None), Certification::Failed(_)) => None,
        (Expect::Witness(Some(h)), Certification::Failed(w)) if w.hypothesis() == *h => None,
        (Expect::Witness(Some(h)), Certification::Failed(w)) => Some(format!(
            "expected a {} witness, got {}",
            h.name(),
            w.hypothesis().name()
        )),
        (Expect::Witness(_), Certification::Certified(_)) => {
            Some("expected a witness, got a certificate".into())
        }
    }
}

enum Expect {
    Certificate(AffineMap),
    /// Any witness, or one for the given hypothesis.
    Witness(Option<Hypothesis>),
}

const MAX_ATOMS: usize = 8;

/// Runs trial `index` of a campaign; identical inputs give identical records.
pub fn run_trial(profile: Profile, seed: u64, index: usize, budget: &ProbeBudget) -> TrialRecord {
    let mut rng = rng_for(seed, index as u64);
    let trial_seed: u64 = rng.random();
    let dim = rng.random_range(2..=3);
    let (map, params, expect) = match profile {
        Profile::Affine => {
            let space = random_space(&mut rng, 2, MAX_ATOMS);
            let a = random_invertible_affine(&mut rng, &space, dim);
            (
                MapSpec::Affine(a.clone()),
                json!({}),
                Some(Expect::Certificate(a)),
            )
        }
        Profile::SemilinearNontrivial => (
            random_nonlocal_semilinear(&mut rng, MAX_ATOMS, dim),
            json!({}),
            Some(Expect::Witness(Some(Hypothesis::Locality))),
        ),
        Profile::PerAtom => {
            let space = random_space(&mut rng, 2, MAX_ATOMS);
            let m = random_bijective_peratom(&mut rng, &space, dim);
            let expect = match m.as_affine() {
                Some(a) => Expect::Certificate(a),
                None => Expect::Witness(None),
            };
            (MapSpec::PerAtom(m), json!({}), Some(expect))
        }
        Profile::Corrupted => {
            let defect = DEFECTS[index % DEFECTS.len()];
            (
                corrupted_map(&mut rng, defect, MAX_ATOMS, dim),
                json!({ "defect": defect }),
                Some(Expect::Witness(Some(defect))),
            )
        }
        Profile::SegmentExploration => {
            let map = if index % 2 == 0 {
                random_nonlocal_semilinear(&mut rng, MAX_ATOMS, dim)
            } else {
                let (space, images) = random_paired_space(&mut rng, MAX_ATOMS);
                let base = MapSpec::PerAtom(random_bijective_peratom(&mut rng, &space, dim));
                // twisting by a permutation keeps it bijective but not local
                let sigma = AtomPermutation::new(&space, images).expect("pairing preserves mass");
                twisted(base, sigma)
            };
            (map, json!({}), None)
        }
    };
    let mut params = params;
    params["atoms"] = json!(map.space().len());
    params["dim"] = json!(dim);

    let (outcome, surprise) = match expect {
        Some(expect) => {
            let out = certify_affine(&map, budget, trial_seed).expect("generated maps have n >= 2");
            let surprise = certification_surprise(&map, &out, &expect);
            (TrialOutcome::Certification(out), surprise)
        }
        None => {
            let local = is_local(&map).verdict;
            let segment = check_segment_preservation(
                &map,
                budget.line_trials,
                budget.lambda_samples,
                trial_seed,
            )
            .map(Box::new);
            let lines = check_line_preservation(&map, budget.line_trials, trial_seed);
            (
                TrialOutcome::Exploration {
                    local,
                    segment,
                    lines,
                },
                None,
            )
        }
    };
    if let Some(s) = &surprise {
        log::warn!("trial {index}: {s}");
    }
    TrialRecord {
        index,
        trial_seed,
        map,
        params,
        outcome,
        surprise,
    }
}

/// `x ↦ f(x ∘ σ)` for a per-atom map `f`, as an oracle.
fn twisted(base: MapSpec, sigma: AtomPermutation) -> MapSpec {
    let space = base.space().clone();
    let dim = base.dim();
    MapSpec::BlackBox(BlackBoxMap::new(&space, dim, "twisted-peratom", move |x| {
        base.apply(&x.pull_back(sigma.images()))
    }))
}

#[derive(Debug, Clone)]
pub struct FuzzReport {
    pub profile: Profile,
    pub seed: u64,
    pub budget: ProbeBudget,
    pub records: Vec<TrialRecord>,
}

impl FuzzReport {
    pub fn certificates(&self) -> usize {
        self.records
            .iter()
            .filter(|r| {
                matches!(
                    r.outcome,
                    TrialOutcome::Certification(Certification::Certified(_))
                )
            })
            .count()
    }

    pub fn witnesses(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.witness().is_some())
            .count()
    }

    pub fn surprises(&self) -> usize {
        self.records.iter().filter(|r| r.surprise.is_some()).count()
    }

    pub fn findings(&self) -> usize {
        self.records.iter().filter(|r| r.is_finding()).count()
    }

    pub fn by_hypothesis(&self) -> BTreeMap<Hypothesis, usize> {
        let mut out = BTreeMap::new();
        for w in self.records.iter().filter_map(TrialRecord::witness) {
            *out.entry(w.hypothesis()).or_insert(0) += 1;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let by_hypothesis: serde_json::Map<String, Value> = self
            .by_hypothesis()
            .into_iter()
            .map(|(h, n)| (h.name().to_string(), json!(n)))
            .collect();
        json!({
            "profile": self.profile.name(),
            "seed": self.seed,
            "budget": self.budget,
            "counts": {
                "trials": self.records.len(),
                "certificates": self.certificates(),
                "witnesses": self.witnesses(),
                "surprises": self.surprises(),
                "findings": self.findings(),
                "by_hypothesis": by_hypothesis,
            },
            "trials": self.records.iter().map(TrialRecord::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn run_campaign(
    profile: Profile,
    seed: u64,
    trials: usize,
    budget: &ProbeBudget,
) -> FuzzReport {
    FuzzReport {
        profile,
        seed,
        budget: *budget,
        records: (0..trials)
            .map(|i| run_trial(profile, seed, i, budget))
            .collect(),
    }
}
