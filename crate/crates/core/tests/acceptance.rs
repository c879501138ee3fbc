//! Acceptance checks, one line per criterion. Seeds are fixed up front and
//! never tuned to the outcome.

use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;
use rumpac::advantage::{advantage_ratio, pref_bound_holds, min_ar_bruteforce, min_ar_variational, pairwise_pref_in_set};
use rumpac::algorithms::PacConfig;
use rumpac::harness::{rows_csv, run_batch, write_batch, ExperimentConfig, Format, Generator, InstanceSpec, OutputSpec};
use rumpac::noise::NoiseSpec;
use rumpac::rank_breaking::comparisons_per_round;
use rumpac::rum::{FeedbackKind, RumInstance, Variant};
use rumpac::{Learner, PairwiseCounts, RandomStream};

type Outcome = (bool, String);
type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn families() -> Vec<NoiseSpec<f64>> {
    vec![
        NoiseSpec::exponential(1.0).unwrap(),
        NoiseSpec::gumbel(0.0, 1.0).unwrap(),
        NoiseSpec::uniform(0.0, 1.0).unwrap(),
        NoiseSpec::gamma(2.0, 1.0).unwrap(),
        NoiseSpec::weibull(1.0, 1.5).unwrap(),
        NoiseSpec::normal(0.0, 1.0).unwrap(),
    ]
}

fn random_thetas(rng: &mut RandomStream, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

fn random_subset(rng: &mut RandomStream, n: usize, size: usize) -> Vec<usize> {
    let mut s = rng.sample_without_replacement(&(0..n).collect::<Vec<_>>(), size);
    s.sort_unstable();
    s
}

fn separated_batch(pac: PacConfig<f64>, master_seed: u64) -> ExperimentConfig {
    let mut thetas = vec![0.0; 8];
    thetas[0] = 1.0;
    ExperimentConfig {
        instance: InstanceSpec::Explicit(RumInstance::new(thetas, NoiseSpec::standard_gumbel()).unwrap()),
        k: 4,
        pac,
        trials: 50,
        master_seed,
        output: None,
    }
}

fn ac1() -> Outcome {
    let mut rng = RandomStream::from_seed(0xAC01);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(2..=8);
        let inst = RumInstance::new(random_thetas(&mut rng, n, -2.0, 2.0), NoiseSpec::standard_gumbel()).unwrap();
        let all: Vec<usize> = (0..n).collect();
        let z: f64 = inst.thetas().iter().map(|t| t.exp()).sum();
        for i in 0..n {
            let quad = inst.win_probability_quadrature(&all, i).unwrap();
            worst = worst.max((quad - inst.thetas()[i].exp() / z).abs());
        }
    }
    (worst <= 1e-6, format!("200 instances, max |quadrature - softmax| = {worst:.2e} (tol 1e-6)"))
}

fn ac2() -> Outcome {
    let mut rng = RandomStream::from_seed(0xAC02);
    let rounds = 200_000u64;
    let mut cases = Vec::new();
    for (f, noise) in families().into_iter().enumerate() {
        for c in 0..50 {
            let n = rng.gen_range(2..=6);
            let inst = RumInstance::new(random_thetas(&mut rng, n, -1.0, 1.0), noise).unwrap();
            let size = rng.gen_range(2..=n);
            let subset = random_subset(&mut rng, n, size);
            let item = subset[rng.below(size)];
            cases.push((f, c, inst, subset, item));
        }
    }
    let results: Vec<(usize, f64, f64, f64)> = cases
        .par_iter()
        .map(|(f, c, inst, subset, item)| {
            let exact = inst.win_probability_exact(subset, *item).unwrap();
            let mut mc_rng = RandomStream::child(0xAC02_0000, (*f * 50 + *c) as u64);
            let mc = inst.win_probability_mc(subset, *item, rounds, &mut mc_rng).unwrap().p;
            let band = 3.0 * (exact * (1.0 - exact) / rounds as f64).sqrt();
            (*f, exact, mc, band)
        })
        .collect();
    let fails: Vec<String> = results
        .iter()
        .filter(|(_, e, m, b)| (e - m).abs() > *b)
        .map(|(f, e, m, b)| format!("{}: exact {e:.5} mc {m:.5} band {b:.2e}", families()[*f].family()))
        .collect();
    let worst = results.iter().map(|(_, e, m, b)| if *b > 0.0 { (e - m).abs() / (b / 3.0) } else { 0.0 }).fold(0.0, f64::max);
    (
        fails.is_empty(),
        format!(
            "6 families x 50 triples, {} outside 3 sigma, largest deviation {worst:.2} sigma{}",
            fails.len(),
            if fails.is_empty() { String::new() } else { format!(" [{}]", fails.join("; ")) }
        ),
    )
}

fn ac3() -> Outcome {
    let mut rng = RandomStream::from_seed(0xAC03);
    let mut worst_lib = 0.0f64;
    let mut worst_quad = 0.0f64;
    for sigma in [0.5, 1.0, 2.0] {
        let thetas = random_thetas(&mut rng, 6, -1.0, 1.0);
        let inst = RumInstance::new(thetas.clone(), NoiseSpec::gumbel(0.0, sigma).unwrap()).unwrap();
        for i in 0..6 {
            for j in (0..6).filter(|&j| j != i) {
                let target = ((thetas[i] - thetas[j]) / sigma).exp();
                let lib = min_ar_bruteforce(&inst, i, j, 3).unwrap().value;
                worst_lib = worst_lib.max((lib - target).abs());
                // same minimum with probabilities from the quadrature route
                let quad = (0..6)
                    .filter(|&r| r != i && r != j)
                    .map(|r| {
                        let s = [i, j, r];
                        inst.win_probability_quadrature(&s, i).unwrap() / inst.win_probability_quadrature(&s, j).unwrap()
                    })
                    .fold(f64::INFINITY, f64::min);
                worst_quad = worst_quad.max((quad - target).abs());
            }
        }
    }
    (
        worst_lib <= 1e-4 && worst_quad <= 1e-4,
        format!("n=6, k=3, sigma in {{0.5,1,2}}, all pairs: max |Min-AR - e^(delta/sigma)| = {worst_lib:.2e} (closed form), {worst_quad:.2e} (quadrature), tol 1e-4"),
    )
}

fn ac4() -> Outcome {
    let mut rng = RandomStream::from_seed(0xAC04);
    let mut cases = Vec::new();
    for noise in families() {
        for _ in 0..100 {
            let n = rng.gen_range(5..=6);
            let k = rng.gen_range(3..=4);
            let thetas = random_thetas(&mut rng, n, -1.0, 1.0);
            let pair = random_subset(&mut rng, n, 2);
            let (i, j) = if rng.gen::<bool>() { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
            cases.push((noise, thetas, k, i, j));
        }
    }
    let excess: Vec<(String, f64)> = cases
        .par_iter()
        .map(|(noise, thetas, k, i, j)| {
            let inst = RumInstance::new(thetas.clone(), *noise).unwrap();
            let brute = min_ar_bruteforce(&inst, *i, *j, *k).unwrap().value;
            let bound = min_ar_variational(noise, thetas[*i], thetas[*j]).unwrap();
            (noise.family().to_string(), bound - brute)
        })
        .collect();
    let violations = excess.iter().filter(|(_, e)| *e > 1e-6).count();
    let worst = excess.iter().map(|(_, e)| *e).fold(f64::NEG_INFINITY, f64::max);
    (
        violations == 0,
        format!("600 instances, {violations} with bound > brute force + 1e-6; max(bound - brute) = {worst:.2e}"),
    )
}

fn ac5() -> Outcome {
    let mut rng = RandomStream::from_seed(0xAC05);
    let fams = families();
    let mut checked = 0;
    let mut violations = 0;
    let mut worst_gap = 0.0f64;
    while checked < 500 {
        let noise = fams[rng.below(fams.len())];
        let n = rng.gen_range(2..=6);
        let inst = RumInstance::new(random_thetas(&mut rng, n, -1.0, 1.0), noise).unwrap();
        let size = rng.gen_range(2..=n);
        let subset = random_subset(&mut rng, n, size);
        let pair = random_subset(&mut rng, size, 2);
        let (mut i, mut j) = (subset[pair[0]], subset[pair[1]]);
        let r = match advantage_ratio(&inst, &subset, i, j) {
            Ok(r) if r >= 1.0 => r,
            Ok(_) => {
                std::mem::swap(&mut i, &mut j);
                match advantage_ratio(&inst, &subset, i, j) {
                    Ok(r) => r,
                    Err(_) => continue,
                }
            }
            // a never-winning denominator has no finite ratio to test
            Err(_) => continue,
        };
        let p = pairwise_pref_in_set(&inst, &subset, i, j).unwrap();
        checked += 1;
        if !pref_bound_holds(r, p, 1e-9) {
            violations += 1;
            worst_gap = worst_gap.max((r - 1.0) / 4.0 - (p - 0.5));
        }
    }
    (
        violations == 0,
        format!(
            "500 samples with r >= 1, {violations} violate p - 1/2 >= (r-1)/4 - 1e-9 (largest shortfall {worst_gap:.3}); \
             p - 1/2 = (r-1)/(2(r+1)) is below (r-1)/4 for every r > 1, see ledger"
        ),
    )
}

fn ac6() -> Outcome {
    let mut rng = RandomStream::from_seed(0xAC06);
    let mut bad = Vec::new();
    for k in 2..=8 {
        let inst = RumInstance::new(random_thetas(&mut rng, k, -1.0, 1.0), NoiseSpec::standard_gumbel()).unwrap();
        let group: Vec<usize> = (0..k).collect();
        for m in 2..=k {
            let mut counts = PairwiseCounts::new(group.clone());
            let obs = inst.sample_feedback(&group, FeedbackKind::TopM(m), &mut rng).unwrap();
            counts.break_ranking(&obs).unwrap();
            let expected = (m * (m - 1) / 2 + (k - m) * m) as u64;
            if counts.total() != expected || comparisons_per_round(k, m) != expected {
                bad.push(format!("k={k} m={m}: {} vs {expected}", counts.total()));
            }
        }
    }
    (bad.is_empty(), format!("all 2 <= m <= k <= 8: {} mismatches {}", bad.len(), bad.join(", ")))
}

fn ac7() -> Outcome {
    let pac = PacConfig::new(0.8, 0.1, 0.25, 1).unwrap();
    let s = run_batch(&separated_batch(pac, 0xAC07), true).unwrap();
    let ok = s.successes >= 39 && s.max_rounds <= s.budget_bound;
    (
        ok,
        format!(
            "Seq-PB n=8 k=4: {}/50 successes (need 39), max rounds {} <= budget {}",
            s.successes, s.max_rounds, s.budget_bound
        ),
    )
}

fn ac8() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut last: Option<(u64, f64)> = None;
    for m in [1, 2, 4] {
        let pac = PacConfig::new(0.8, 0.1, 0.25, m).unwrap().with_learner(Learner::MseqPb).unwrap();
        let s = run_batch(&separated_batch(pac, 0xAC08), true).unwrap();
        ok &= s.successes >= 39 && s.max_rounds <= s.budget_bound;
        if let Some((b, r)) = last {
            ok &= s.budget_bound < b && s.mean_rounds < r;
        }
        last = Some((s.budget_bound, s.mean_rounds));
        lines.push(format!("m={m}: budget {} mean {:.0} successes {}/50", s.budget_bound, s.mean_rounds, s.successes));
    }
    let seq = PacConfig::new(0.8, 0.1, 0.25, 1).unwrap();
    let s = run_batch(&separated_batch(seq, 0xAC08), true).unwrap();
    lines.push(format!(
        "(Seq-PB at m=1 for reference: budget {} mean {:.0} successes {}/50)",
        s.budget_bound, s.mean_rounds, s.successes
    ));
    (ok, format!("mSeq-PB across m; {}", lines.join("; ")))
}

fn ac9() -> Outcome {
    let t = RumInstance::<f64>::hardness(8, 0.25, Variant::True).unwrap();
    let pattern_true = [1.0, 0.75, 0.75, 0.75, 0.75, 0.75, 0.75, 0.75];
    let mut ok = t.thetas().iter().zip(pattern_true).all(|(a, b)| a.to_bits() == f64::to_bits(b));
    for a in 1..8 {
        let m = RumInstance::<f64>::hardness(8, 0.25, Variant::Modified(a)).unwrap();
        let expect: Vec<f64> = (0..8).map(|r| if r == a { 1.0 } else if r == 0 { 0.75 } else { 0.5 }).collect();
        ok &= m.thetas().iter().zip(&expect).all(|(x, y)| x.to_bits() == y.to_bits());
    }
    let patterns_ok = ok;
    let cfg = ExperimentConfig {
        instance: InstanceSpec::Generated(Generator::Hardness {
            n: 8,
            eps: 0.25,
            variant: Variant::True,
        }),
        k: 4,
        pac: PacConfig::new(0.25, 0.1, 0.25, 1).unwrap(),
        trials: 50,
        master_seed: 0xAC09,
        output: None,
    };
    let s = run_batch(&cfg, true).unwrap();
    let threshold = s.pac_threshold();
    ok &= s.success_rate >= threshold && s.max_rounds <= s.budget_bound;
    (
        ok,
        format!(
            "patterns bit-equal: {patterns_ok}; Seq-PB on True instance eps=0.25: {}/50 = {:.2} (need >= {threshold:.3}), rounds {} <= budget {}",
            s.successes, s.success_rate, s.max_rounds, s.budget_bound
        ),
    )
}

fn ac10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = separated_batch(PacConfig::new(0.8, 0.2, 0.4, 2).unwrap(), 0xAC10);
    cfg.trials = 20;
    let mut bytes = Vec::new();
    for (run, parallel) in [(0, true), (1, true), (2, false)] {
        let s = run_batch(&cfg, parallel).unwrap();
        let out = OutputSpec {
            path: dir.path().join(format!("run{run}.csv")),
            format: Format::Csv,
        };
        write_batch(&s, &out).unwrap();
        bytes.push(std::fs::read(&out.path).unwrap());
        assert_eq!(rows_csv(&s.rows).as_bytes(), bytes.last().unwrap().as_slice());
    }
    let same = bytes.iter().all_equal();
    (same, format!("three runs (parallel, parallel, serial) of 20 trials: CSV byte-identical = {same}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", "PL closed-form equivalence", Duration::from_secs(10), ac1),
        ("AC2", "quadrature vs Monte Carlo", Duration::from_secs(120), ac2),
        ("AC3", "Gumbel Min-AR equality", Duration::from_secs(60), ac3),
        ("AC4", "variational lower bound", Duration::from_secs(300), ac4),
        ("AC5", "ratio-to-preference bound", Duration::from_secs(60), ac5),
        ("AC6", "rank-breaking count", Duration::from_secs(10), ac6),
        ("AC7", "PAC success", Duration::from_secs(60), ac7),
        ("AC8", "top-m speedup", Duration::from_secs(120), ac8),
        ("AC9", "hardness instances", Duration::from_secs(300), ac9),
        ("AC10", "determinism", Duration::from_secs(60), ac10),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let (ok, detail) = check();
        let took = start.elapsed();
        let in_time = took <= limit;
        let pass = ok && in_time;
        println!(
            "[{}] {id} {name}: {detail} ({:.1}s, limit {}s{})",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", over time" }
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria passed");
    } else {
        println!("acceptance: {} of 10 failed: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
