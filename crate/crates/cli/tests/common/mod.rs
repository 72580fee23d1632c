#![allow(dead_code)]

use gcverify::catalog::{catalog, lookup};
use gcverify::checks::{Built, Workspace};
use gcverify::{parse, Report, StructureFile};
use gcverify_core::calculus::Chart;
use gcverify_core::scalar::ScalarField;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;

pub fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial of total degree at most `degree` in the chart
/// coordinates `vars`, integer coefficients in [-2, 2].
pub fn random_poly<R: Rng>(chart: &Chart, vars: &[usize], degree: u32, rng: &mut R) -> ScalarField {
    fn go<R: Rng>(
        chart: &Chart,
        vars: &[usize],
        budget: u32,
        mono: ScalarField,
        acc: &mut ScalarField,
        rng: &mut R,
    ) {
        let Some((&v, rest)) = vars.split_first() else {
            *acc = &*acc + &(&mono * &chart.int(rng.gen_range(-2..=2)));
            return;
        };
        let mut m = mono;
        for e in 0..=budget {
            go(chart, rest, budget - e, m.clone(), acc, rng);
            m = &m * &chart.coord(v);
        }
    }
    let mut acc = chart.zero();
    go(chart, vars, degree, chart.one(), &mut acc, rng);
    acc
}

pub fn fixture(name: &str) -> StructureFile {
    parse(
        lookup(name)
            .unwrap_or_else(|| panic!("no catalog entry {name}"))
            .text,
    )
    .unwrap()
}

pub fn all_fixtures() -> Vec<(&'static str, StructureFile)> {
    catalog()
        .iter()
        .map(|e| (e.name, parse(e.text).unwrap()))
        .collect()
}

pub fn run(file: &StructureFile, checks: &[&str]) -> Report {
    let filter: Vec<String> = checks.iter().map(|s| s.to_string()).collect();
    gcverify::run(file, &filter).unwrap()
}

/// Pass flag of one check/method on one structure.
pub fn outcome(r: &Report, id: &str, structure: &str, method: Option<&str>) -> bool {
    let c = r
        .find(id, structure, method)
        .unwrap_or_else(|| panic!("no {id} {structure} {method:?} in report"));
    assert!(c.error.is_none(), "{id} {structure}: {:?}", c.error);
    c.pass
}

pub fn built(file: &StructureFile, name: &str) -> Built {
    let ws = Workspace::build(file);
    ws.built[name]
        .clone()
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}
