use std::fs;
use std::path::Path;

use l0_affine::certifier::{certify_from_segments, endo_identity_check};
use l0_affine::fuzz::{self, Profile};
use l0_affine::maps::{
    check_line_preservation, injectivity, is_local, make_swap_map, stability_witness,
};
use l0_affine::probes::rng_for;
use l0_affine::{
    certify_affine, decompose_independence, wire, Certification, Event, MapSpec, ProbSpace,
    ProbeSet,
};
use rand::Rng;
use serde_json::{json, Value};

use crate::input::{field, read_json, read_space, InputError};
use crate::Common;

/// A report and whether everything it checked passed.
pub struct Report {
    pub json: Value,
    pub ok: bool,
}

type Outcome = Result<Report, InputError>;

/// Writes the canonical report; returns whether the run passed.
pub fn emit(common: &Common, report: Report) -> Result<bool, InputError> {
    let text = wire::to_canonical_string(&report.json);
    match &common.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| InputError::Io(path.display().to_string(), e))?
        }
        None => print!("{text}"),
    }
    Ok(report.ok)
}

fn read_map(common: &Common, path: &Path) -> Result<(ProbSpace, MapSpec), InputError> {
    let space = read_space(common.space.as_deref())?;
    let map = wire::map_from_json(&space, &read_json(path)?)?;
    Ok((space, map))
}

pub fn decompose(common: &Common, path: &Path) -> Outcome {
    let space = read_space(common.space.as_deref())?;
    let v = read_json(path)?;
    let x = wire::vector_from_json(&space, field(&v, "x", path)?)?;
    let y = wire::vector_from_json(&space, field(&v, "y", path)?)?;
    let d = decompose_independence(&x, &y)?;
    Ok(Report {
        json: wire::decomposition_to_json(&d),
        ok: true,
    })
}

/// All events when there are at most this many atoms.
const EXHAUSTIVE_ATOMS: usize = 12;
const SAMPLED_EVENTS: usize = 4096;

/// Every event, or seeded random events plus all singletons on large spaces.
fn stability_events(space: &ProbSpace, seed: u64) -> (Vec<Event>, bool) {
    if space.len() <= EXHAUSTIVE_ATOMS {
        return (space.all_events().collect(), true);
    }
    let mut rng = rng_for(seed, 2);
    let mut events: Vec<Event> = (0..space.len()).map(|a| space.singleton(a)).collect();
    for _ in 0..SAMPLED_EVENTS {
        let members: Vec<usize> = (0..space.len()).filter(|_| rng.random_bool(0.5)).collect();
        events.push(Event::new(space, members).expect("atoms of this space"));
    }
    (events, false)
}

pub fn check_map(common: &Common, path: &Path, replay: Option<&Path>) -> Outcome {
    let (space, map) = read_map(common, path)?;
    if let Some(w) = replay {
        let witness = wire::failure_witness_from_json(&space, &read_json(w)?)?;
        let reproduces = witness.reproduces(&map);
        return Ok(Report {
            json: json!({
                "failed_hypothesis": witness.hypothesis(),
                "reproduces": reproduces,
            }),
            ok: !reproduces,
        });
    }

    let budget = common.budget();
    let locality = is_local(&map);
    let (events, exhaustive) = stability_events(&space, common.seed);
    let compact = ProbeSet::compact(&space, map.dim(), 2, &mut rng_for(common.seed, 1));
    let stability = stability_witness(&map, &events, &compact);
    let probes = ProbeSet::generate(&space, map.dim(), &budget, &mut rng_for(common.seed, 1));
    let inj = injectivity(&map, &probes);
    let lines = check_line_preservation(&map, budget.line_trials, common.seed);

    let ok = locality.verdict && stability.is_none() && inj.injective && lines.passed();
    Ok(Report {
        json: json!({
            "kind": map.kind(),
            "locality": wire::locality_report_to_json(&locality),
            "stability": {
                "stable": stability.is_none(),
                "events": events.len(),
                "exhaustive": exhaustive,
                "witness": stability.as_ref().map(wire::stability_witness_to_json),
            },
            "injectivity": wire::injectivity_report_to_json(&inj, &space),
            "lines": wire::line_report_to_json(&lines),
            "passed": ok,
        }),
        ok,
    })
}

pub fn certify(common: &Common, path: &Path, from_segments: bool) -> Outcome {
    let (space, map) = read_map(common, path)?;
    let budget = common.budget();
    let out = if from_segments {
        certify_from_segments(&map, &budget, common.seed)?
    } else {
        certify_affine(&map, &budget, common.seed)?
    };
    Ok(match out {
        Certification::Certified(c) => Report {
            json: wire::certificate_to_json(&c),
            ok: true,
        },
        Certification::Failed(w) => Report {
            json: wire::failure_witness_to_json(&w, &space),
            ok: false,
        },
    })
}

pub fn fuzz(common: &Common, profile: Profile, trial: Option<usize>) -> Outcome {
    // --trials counts campaign trials here, so a single-trial replay sees
    // the same budget as the campaign
    let budget = common.base_budget();
    if let Some(i) = trial {
        let record = fuzz::run_trial(profile, common.seed, i, &budget);
        return Ok(Report {
            ok: record.surprise.is_none(),
            json: record.to_json(),
        });
    }
    let trials = common.trials.unwrap_or(100);
    if trials == 0 {
        return Err(InputError::Usage("--trials must be at least 1".into()));
    }
    let report = fuzz::run_campaign(profile, common.seed, trials, &budget);
    log::info!(
        "{profile}: {} certificates, {} witnesses, {} surprises",
        report.certificates(),
        report.witnesses(),
        report.surprises()
    );
    Ok(Report {
        ok: report.surprises() == 0,
        json: report.to_json(),
    })
}

pub fn endo(common: &Common, path: &Path) -> Outcome {
    let space = read_space(common.space.as_deref())?;
    let phi = wire::scalar_map_from_json(&space, &read_json(path)?)?;
    let report = endo_identity_check(&phi, &space, &common.budget(), common.seed)?;
    Ok(Report {
        json: wire::endo_report_to_json(&report),
        ok: report.identity_pass(),
    })
}

pub fn swap_map(common: &Common, dim: usize) -> Outcome {
    let space = read_space(common.space.as_deref())?;
    let map = make_swap_map(&space, dim)?;
    Ok(Report {
        json: json!({
            "space": wire::space_to_json(&space),
            "map": wire::map_to_json(&map)?,
        }),
        ok: true,
    })
}
