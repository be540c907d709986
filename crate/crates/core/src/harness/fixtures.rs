//! Worked examples with their published values, as a TAP-style list.

use std::fmt::Write as _;

use serde::Serialize;

use crate::history::{History, RewardConfig, ShareId};
use crate::rational::{self, int, ratio, Rational};
use crate::schemes::{Amount, EpsilonTable, Scheme, SchemeError};

/// Tolerance, relative to `R`, for values published to two decimals.
pub const PUBLISHED_TOLERANCE: f64 = 0.005;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub actual: String,
}

fn exact_check(name: &str, expected: &[Rational], actual: &[Rational]) -> FixtureResult {
    let show = |v: &[Rational]| v.iter().map(rational::to_fraction_string).collect::<Vec<_>>().join(", ");
    FixtureResult {
        name: name.to_string(),
        passed: expected == actual,
        expected: format!("({})", show(expected)),
        actual: format!("({})", show(actual)),
    }
}

fn approx_check(name: &str, expected: &[f64], actual: &[f64]) -> FixtureResult {
    let show = |v: &[f64]| v.iter().map(|x| format!("{x:.5}")).collect::<Vec<_>>().join(", ");
    FixtureResult {
        name: name.to_string(),
        passed: expected.len() == actual.len()
            && expected.iter().zip(actual).all(|(e, a)| (e - a).abs() <= PUBLISHED_TOLERANCE),
        expected: format!("({}) ± {PUBLISHED_TOLERANCE}", show(expected)),
        actual: format!("({})", show(actual)),
    }
}

fn flag_check(name: &str, expected: &str, holds: bool, actual: String) -> FixtureResult {
    FixtureResult {
        name: name.to_string(),
        passed: holds,
        expected: expected.to_string(),
        actual,
    }
}

fn exact_awards(scheme: &Scheme, h: &History, ids: &[&str]) -> Result<Vec<Rational>, SchemeError> {
    ids.iter()
        .map(|id| {
            let award = scheme.award(&ShareId::from(*id), h)?;
            Ok(award.amount().as_exact().cloned().expect("exact scheme"))
        })
        .collect()
}

fn float_awards(scheme: &Scheme, h: &History, ids: &[&str]) -> Result<Vec<f64>, SchemeError> {
    ids.iter()
        .map(|id| Ok(scheme.award(&ShareId::from(*id), h)?.amount().to_f64()))
        .collect()
}

fn round_sum(scheme: &Scheme, h: &History, r: usize) -> Result<Amount, SchemeError> {
    Ok(scheme.payout_report(h)?.rounds[r - 1].sum.clone())
}

fn unit_shape(lengths: &[usize]) -> History {
    History::from_round_lengths(lengths, RewardConfig::unit()).expect("valid shape")
}

/// The PPLNS example: rounds of 5, 1, 1, 1 and 12 shares, N = 3.
fn pplns_fixtures(out: &mut Vec<FixtureResult>) -> Result<(), SchemeError> {
    let h = unit_shape(&[5, 1, 1, 1, 12]);
    let pplns = Scheme::pplns(3)?;
    let first_six = ["s1", "s2", "s3", "s4", "s5", "s6"];
    out.push(exact_check(
        "pplns_example_awards",
        &[int(0), int(0), ratio(1, 3), ratio(2, 3), int(1), int(1)],
        &exact_awards(&pplns, &h, &first_six)?,
    ));

    let p1 = round_sum(&pplns, &h, 1)?;
    let p2 = round_sum(&pplns, &h, 2)?;
    out.push(exact_check("pplns_example_round1_sum", &[int(2)], &[p1.as_exact().cloned().expect("exact")]));
    out.push(flag_check(
        "pplns_example_budget_and_total",
        "sum(P1) > B and sum(P1) != sum(P2)",
        p1.exceeds(h.reward().block_reward(), 0.0, 1.0) && p1 != p2,
        format!("sum(P1) = {p1}, sum(P2) = {p2}"),
    ));

    let restricted = h.restrict(1)?;
    out.push(exact_check(
        "pplns_example_restriction",
        &[int(0), int(0), ratio(1, 3), ratio(1, 3), ratio(1, 3)],
        &exact_awards(&pplns, &restricted, &first_six[..5])?,
    ));

    let extended = h.extend_round(1)?;
    out.push(exact_check(
        "pplns_example_extension",
        &[int(0), int(0), int(0), ratio(1, 3), ratio(2, 3), int(1)],
        &exact_awards(&pplns, &extended, &["s1", "s2", "s3", "s4", "s5", "s*"])?,
    ));
    Ok(())
}

/// The geometric example at r = 2: rounds {s1, s2}, {s3}, ... and the
/// extension of the first round.
fn geometric_fixtures(out: &mut Vec<FixtureResult>) -> Result<(), SchemeError> {
    let h = unit_shape(&[2, 1, 17]);
    let extended = h.extend_round(1)?;

    let geo = Scheme::geometric(int(2))?;
    out.push(exact_check(
        "geometric_example_awards",
        &[ratio(1, 4), ratio(1, 2), ratio(1, 2)],
        &exact_awards(&geo, &h, &["s1", "s2", "s3"])?,
    ));
    let (p1, p2) = (round_sum(&geo, &h, 1)?, round_sum(&geo, &h, 2)?);
    out.push(flag_check(
        "geometric_example_total_differs",
        "sum(P1) != sum(P2)",
        p1 != p2,
        format!("sum(P1) = {p1}, sum(P2) = {p2}"),
    ));
    out.push(exact_check(
        "geometric_example_extension",
        &[ratio(1, 8), ratio(1, 4), ratio(1, 2)],
        &exact_awards(&geo, &extended, &["s1", "s2", "s*"])?,
    ));

    let cgeo = Scheme::constrained_geometric(int(2))?;
    out.push(exact_check(
        "constrained_geometric_example_awards",
        &[ratio(1, 3), ratio(2, 3)],
        &exact_awards(&cgeo, &h, &["s1", "s2"])?,
    ));
    out.push(exact_check(
        "constrained_geometric_example_extension",
        &[ratio(1, 7), ratio(2, 7), ratio(4, 7)],
        &exact_awards(&cgeo, &extended, &["s1", "s2", "s*"])?,
    ));
    Ok(())
}

/// The Slush example: times 1, 2, 3, rounds {s1, s2}, {s3}, λ = 1200, and
/// the first round extended by a share at 2.5.
fn slush_fixtures(out: &mut Vec<FixtureResult>) -> Result<(), SchemeError> {
    let slush = Scheme::slush(1200.0)?;
    let h = unit_shape(&[2, 1]);
    let awards = float_awards(&slush, &h, &["s1", "s2", "s3"])?;
    for (i, published) in [0.82, 0.83, 0.33].into_iter().enumerate() {
        out.push(approx_check(&format!("slush_example_s{}", i + 1), &[published], &[awards[i]]));
    }
    let (p1, p2) = (round_sum(&slush, &h, 1)?, round_sum(&slush, &h, 2)?);
    out.push(flag_check(
        "slush_example_budget_and_total",
        "sum(P1) > B and sum(P1) != sum(P2)",
        p1.to_f64() > 1.0 && (p1.to_f64() - p2.to_f64()).abs() > PUBLISHED_TOLERANCE,
        format!("sum(P1) = {}, sum(P2) = {}", p1.display(true), p2.display(true)),
    ));

    let extended = h.extend_round(1)?;
    out.push(exact_check(
        "slush_example_extension_time",
        &[ratio(5, 2)],
        &[extended.share(&ShareId::from("s*"))?.time.clone()],
    ));
    out.push(approx_check(
        "slush_example_extension",
        &[0.58, 0.58],
        &float_awards(&slush, &extended, &["s1", "s2"])?,
    ));
    Ok(())
}

/// Proportional as an absolute-fair and a relative-fair scheme, ε(j) = 1/j,
/// on single rounds of 1 to 8 shares.
fn proportional_fixtures(out: &mut Vec<FixtureResult>) -> Result<(), SchemeError> {
    let harmonic = EpsilonTable::harmonic(8);
    let families = [
        ("absolute_fair_harmonic_is_proportional", Scheme::absolute_fair(harmonic.clone())?),
        ("relative_fair_harmonic_is_proportional", Scheme::relative_fair(harmonic)),
    ];
    for (name, scheme) in families {
        let mut expected = Vec::new();
        let mut actual = Vec::new();
        for len in 1..=8 {
            let h = unit_shape(&[len]);
            for pos in 0..len {
                let id = h.shares()[pos].id.clone();
                expected.push(Scheme::Proportional.award(&id, &h)?.amount().as_exact().cloned().expect("exact"));
                actual.push(scheme.award(&id, &h)?.amount().as_exact().cloned().expect("exact"));
            }
        }
        let mut result = exact_check(name, &expected, &actual);
        if result.passed {
            result.expected = "proportional on lengths 1..=8".into();
            result.actual = "equal".into();
        }
        out.push(result);
    }
    Ok(())
}

pub fn run_fixture_examples() -> Result<Vec<FixtureResult>, SchemeError> {
    let mut out = Vec::new();
    pplns_fixtures(&mut out)?;
    geometric_fixtures(&mut out)?;
    slush_fixtures(&mut out)?;
    proportional_fixtures(&mut out)?;
    Ok(out)
}

/// TAP-style rendering; failing entries carry the expected and actual values.
pub fn render_tap(results: &[FixtureResult]) -> String {
    let mut out = format!("1..{}\n", results.len());
    for (i, r) in results.iter().enumerate() {
        let status = if r.passed { "ok" } else { "not ok" };
        let _ = writeln!(out, "{status} {} - {}", i + 1, r.name);
        if !r.passed {
            let _ = writeln!(out, "  # expected: {}", r.expected);
            let _ = writeln!(out, "  # actual:   {}", r.actual);
        }
    }
    out
}
