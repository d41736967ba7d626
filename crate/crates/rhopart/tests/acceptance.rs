//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `cargo test --test acceptance -- --nocapture` to see
//! them). Every tolerance is pinned here or in the shipped tolerance
//! config; nothing is deferred to later calibration.

use std::collections::BTreeMap;

use rhopart::composition::constrained_compositions;
use rhopart::counting::{count_extensions, count_partitions_of_shape, enumerate_partitions};
use rhopart::experiments::{
    block_count_clt, chain_record_clt, consistency_audit, ctime_jump_clt,
    equal_probability_default_model, equal_probability_demo, gamma_sojourn_audit,
    sampler_agreement, uniformity_audit, BlockCountClt, ChainRecordClt, CtimeJumpClt, Tolerances,
};
use rhopart::laws::{
    decrement_matrix, eppf_two_parameter, formation_probability_fixed_h,
    formation_probability_monte_carlo, shape_probability_monte_carlo,
    shape_probability_product, PMethod,
};
use rhopart::samplers::sample_partition;
use rhopart::{Composition, ConstraintSeq, FrequencyModel, RandomStream, RealConstraintSeq};

const RHO_SET: [&str; 4] = [";1", "1,2;1", ";2", "1,2,3;1"];

fn threads() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
}

fn verdict(id: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {id:02} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {id:02} {name} failed: {detail}");
}

#[test]
fn acceptance_01_counting_exactness() {
    let mut checked = 0u64;
    for rho_s in RHO_SET {
        let rho = ConstraintSeq::parse(rho_s).unwrap();
        for n in 1..=8u64 {
            let all = enumerate_partitions(n, &rho).unwrap();
            let mut by_shape: BTreeMap<Composition, u128> = BTreeMap::new();
            for p in &all {
                assert!(p.is_valid(&rho));
                *by_shape.entry(p.shape()).or_insert(0) += 1;
            }
            let mut total = 0u128;
            for shape in constrained_compositions(n, &rho) {
                let d = count_partitions_of_shape(&shape, &rho).unwrap();
                let brute = by_shape.get(&shape).copied().unwrap_or(0);
                assert_eq!(d, brute, "rho={rho_s} n={n} shape={shape}");
                total += d;
                checked += 1;
            }
            assert_eq!(total, all.len() as u128, "rho={rho_s} n={n}");
        }
    }
    verdict(
        1,
        "counting exactness",
        true,
        &format!("{checked} shape counts equal enumeration, n <= 8, 4 rho"),
    );
}

#[test]
fn acceptance_02_extension_counts() {
    let mut checked = 0u64;
    for rho_s in RHO_SET {
        let rho = ConstraintSeq::parse(rho_s).unwrap();
        for n in 2..=8u64 {
            let big_all = enumerate_partitions(n, &rho).unwrap();
            for np in 1..=5u64.min(n - 1) {
                // Count extensions of every representative (so the
                // representative-independence is checked against the same
                // formula value).
                let mut counts: BTreeMap<(Vec<u32>, Composition), u128> = BTreeMap::new();
                for big in &big_all {
                    let r = big.restrict(np as usize).unwrap();
                    *counts
                        .entry((r.assignment().to_vec(), big.shape()))
                        .or_insert(0) += 1;
                }
                for small in enumerate_partitions(np, &rho).unwrap() {
                    let lam = small.shape();
                    for mu in constrained_compositions(n, &rho) {
                        if mu.num_parts() < lam.num_parts() {
                            continue;
                        }
                        let formula = count_extensions(&lam, &mu, &rho).unwrap();
                        let brute = counts
                            .get(&(small.assignment().to_vec(), mu.clone()))
                            .copied()
                            .unwrap_or(0);
                        assert_eq!(
                            formula, brute,
                            "rho={rho_s} small={small} mu={mu} (representative dependence?)"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    verdict(
        2,
        "extension counts",
        true,
        &format!("{checked} extension counts equal brute force, all representatives"),
    );
}

#[test]
fn acceptance_03_kernel_consistency() {
    let models = [
        "fixed:0.5,0.25;geom=0.5",
        "fixed:0.6,0.3,0.1;geom=0.3",
        "fixed:0.9,0.5,0.2;geom=0.4",
        "iid:point(0.5)",
    ];
    let mut worst = 0.0f64;
    for rho_s in RHO_SET {
        let rho = ConstraintSeq::parse(rho_s).unwrap();
        for model_s in models {
            let model = FrequencyModel::parse(model_s).unwrap();
            for n in 2..=7u64 {
                worst = worst.max(consistency_audit(&model, &rho, n).unwrap());
            }
        }
    }
    verdict(
        3,
        "kernel consistency audit",
        worst < 1e-12,
        &format!("max deviation {worst:.3e} (bound 1e-12)"),
    );
}

#[test]
fn acceptance_04_conditional_uniformity() {
    let model = FrequencyModel::parse("iid:uniform").unwrap();
    let rho = ConstraintSeq::parse("1,2;1").unwrap();
    let audit = uniformity_audit(&model, &rho, 6, 200_000, 42).unwrap();
    let pass = audit.min_p_value > 1e-3;
    verdict(
        4,
        "conditional uniformity",
        pass,
        &format!(
            "chi-square over {} shape classes, min p-value {:.5} (> 1e-3)",
            audit.rows.len(),
            audit.min_p_value
        ),
    );
}

#[test]
fn acceptance_05_paintbox_equals_sequential() {
    let model = FrequencyModel::parse("iid:uniform").unwrap();
    let mut detail = String::new();
    let mut pass = true;
    for rho_s in [";1", "1,2;1"] {
        let rho = ConstraintSeq::parse(rho_s).unwrap();
        let agreement = sampler_agreement(&model, &rho, 6, 1_000_000, 42, threads()).unwrap();
        pass &= agreement.total_variation < 0.01 && agreement.record_violations == 0;
        detail.push_str(&format!(
            "rho={rho_s}: tv={:.5} violations={}; ",
            agreement.total_variation, agreement.record_violations
        ));
    }
    verdict(5, "paintbox = sequential", pass, detail.trim_end());
}

#[test]
fn acceptance_06_product_formula() {
    let models = ["iid:beta(2,3)", "iid:uniform"];
    let mut worst_z = 0.0f64;
    let mut norm_err = 0.0f64;
    for rho_s in [";1", "1,2;1"] {
        let rho = ConstraintSeq::parse(rho_s).unwrap();
        for model_s in models {
            let model = FrequencyModel::parse(model_s).unwrap();
            // Normalization of the product law.
            for n in 1..=6u64 {
                let total: f64 = constrained_compositions(n, &rho)
                    .iter()
                    .map(|lam| shape_probability_product(lam, &rho, &model).unwrap())
                    .sum();
                norm_err = norm_err.max((total - 1.0).abs());
            }
            // Monte Carlo agreement for every constrained shape with
            // |shape| <= 6, using shared samples per n.
            let master = RandomStream::with_stream(42, fnv(rho_s) ^ fnv(model_s));
            for n in 1..=6u64 {
                let reps = 200_000u64;
                let mut stream = master.substream(n);
                let mut counts: BTreeMap<Composition, u64> = BTreeMap::new();
                for _ in 0..reps {
                    let p = sample_partition(&model, &rho, n as usize, &mut stream).unwrap();
                    *counts.entry(p.shape()).or_insert(0) += 1;
                }
                for lam in constrained_compositions(n, &rho) {
                    let exact = shape_probability_product(&lam, &rho, &model).unwrap();
                    let freq = counts.get(&lam).copied().unwrap_or(0) as f64 / reps as f64;
                    let se = (exact * (1.0 - exact) / reps as f64).sqrt().max(1e-12);
                    worst_z = worst_z.max((freq - exact).abs() / se);
                }
            }
            // The dedicated estimator agrees too.
            let mut stream = master.substream(99);
            let lam = Composition::parse("2,1").unwrap();
            let est = shape_probability_monte_carlo(
                &lam,
                &rho,
                &model,
                200_000,
                &mut stream,
                PMethod::AverageConditional,
            )
            .unwrap();
            let exact = shape_probability_product(&lam, &rho, &model).unwrap();
            worst_z = worst_z.max(est.z_against(exact));
        }
    }
    // Decrement matrices at the pinned precision budget.
    let mut row_err = 0.0f64;
    let mut pascal_err = 0.0f64;
    for (rho_k, a, b) in [(1u64, 2.0, 3.0), (2, 2.0, 3.0), (1, 1.0, 1.0), (2, 1.0, 1.0)] {
        let m = decrement_matrix(rho_k, a, b, 100).unwrap();
        row_err = row_err.max(m.max_row_sum_deviation());
        pascal_err = pascal_err.max(m.max_pascal_residual());
    }
    let pass = worst_z < 4.0 && norm_err < 1e-10 && row_err < 1e-12 && pascal_err < 1e-12;
    verdict(
        6,
        "product formula",
        pass,
        &format!(
            "max |z| {worst_z:.2} (< 4), normalization {norm_err:.2e} (< 1e-10), rows {row_err:.2e}, pascal {pascal_err:.2e} (< 1e-12)"
        ),
    );
}

fn fnv(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[test]
fn acceptance_07_formation_law() {
    let reps = 1_000_000u64;
    let mut worst_z = 0.0f64;
    let cases: [(&str, &[&str]); 2] = [
        (";1", &["1,1", "1,2", "1,1,1"]),
        ("1,2;1", &["1,2", "1,3", "1,2,1"]),
    ];
    for (rho_s, lambdas) in cases {
        let rho = ConstraintSeq::parse(rho_s).unwrap();
        for model_s in ["fixed:0.5,0.25;geom=0.5", "iid:uniform"] {
            let model = FrequencyModel::parse(model_s).unwrap();
            for lam_s in lambdas {
                let lam = Composition::parse(lam_s).unwrap();
                let mut stream =
                    RandomStream::with_stream(7, fnv(rho_s) ^ fnv(model_s) ^ fnv(lam_s));
                // Exact q for deterministic models, Monte-Carlo q otherwise.
                let (q, q_se) = match model.deterministic_h_prefix(lam.num_parts() - 1) {
                    Some(h) => (
                        formation_probability_fixed_h(&lam, &rho, &h.unwrap()).unwrap(),
                        0.0,
                    ),
                    None => {
                        let est = formation_probability_monte_carlo(
                            &lam,
                            &rho,
                            &model,
                            reps / 4,
                            &mut stream,
                        )
                        .unwrap();
                        (est.value, est.std_error)
                    }
                };
                let n = lam.total() as usize;
                let mut partial = Vec::new();
                let mut sum = 0u64;
                for &p in lam.parts() {
                    sum += p;
                    partial.push(sum as usize);
                }
                let mut hits = 0u64;
                for _ in 0..reps {
                    let p = sample_partition(&model, &rho, n, &mut stream).unwrap();
                    if p.formation_sequence(&rho) == partial {
                        hits += 1;
                    }
                }
                let freq = hits as f64 / reps as f64;
                let emp_se = (freq * (1.0 - freq) / reps as f64).sqrt();
                let se = (emp_se * emp_se + q_se * q_se).sqrt().max(1e-12);
                let z = (freq - q).abs() / se;
                worst_z = worst_z.max(z);
            }
        }
    }
    verdict(
        7,
        "formation law",
        worst_z < 4.0,
        &format!("max |z| {worst_z:.2} over fixed-H and uniform models at 1e6 samples"),
    );
}

#[test]
fn acceptance_08_block_count_clt() {
    let mut pass = true;
    let mut detail = String::new();
    for rho_s in [";1", "1,2;1"] {
        let cfg = BlockCountClt {
            model: FrequencyModel::parse("iid:uniform").unwrap(),
            rho: ConstraintSeq::parse(rho_s).unwrap(),
            n_list: vec![1_000_000],
            reps: 10_000,
            seed: 20260809,
            threads: threads(),
            tolerances: Tolerances::default(),
        };
        let outcome = block_count_clt(&cfg).unwrap();
        for check in outcome.report.rows[0].checks.iter() {
            pass &= check.pass;
            detail.push_str(&format!(
                "rho={rho_s} {}={:.4}[{}] ",
                check.name,
                check.value,
                if check.pass { "ok" } else { "FAIL" }
            ));
        }
    }
    verdict(
        8,
        "block-count CLT (mean/log n in [0.9,1.15], var/log n in [0.75,1.25], |skew| < 0.15, |exkurt| < 0.3)",
        pass,
        detail.trim_end(),
    );
}

#[test]
fn acceptance_09_two_parameter_family() {
    // Ewens alpha=0, theta=1.
    let e21 = eppf_two_parameter(&Composition::parse("2,1").unwrap(), 0.0, 1.0).unwrap();
    let e12 = eppf_two_parameter(&Composition::parse("1,2").unwrap(), 0.0, 1.0).unwrap();
    let ewens_ok = (e21 - 1.0 / 6.0).abs() < 1e-12 && (e12 - 1.0 / 6.0).abs() < 1e-12;

    // Part-permutation symmetry at (0.5, 0.5) for every shape of n <= 6.
    fn permutations(parts: &[u64]) -> Vec<Vec<u64>> {
        if parts.len() <= 1 {
            return vec![parts.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..parts.len() {
            let mut rest = parts.to_vec();
            let head = rest.remove(i);
            for mut tail in permutations(&rest) {
                let mut v = vec![head];
                v.append(&mut tail);
                out.push(v);
            }
        }
        out
    }
    let ones = ConstraintSeq::ones();
    let mut sym_err = 0.0f64;
    for n in 2..=6u64 {
        for lam in constrained_compositions(n, &ones) {
            let base = eppf_two_parameter(&lam, 0.5, 0.5).unwrap();
            for perm in permutations(lam.parts()) {
                let v = eppf_two_parameter(&Composition::new(perm).unwrap(), 0.5, 0.5).unwrap();
                sym_err = sym_err.max((v - base).abs());
            }
        }
    }

    // Chinese-restaurant oracle at (0.5, 0.5), n = 5, 10^6 seatings.
    let mut stream = RandomStream::with_stream(99, fnv("crp"));
    let reps = 1_000_000u64;
    let mut counts: BTreeMap<Composition, u64> = BTreeMap::new();
    for _ in 0..reps {
        let mut sizes: Vec<u64> = vec![1];
        for m in 1..5usize {
            let mut u = stream.uniform() * (m as f64 + 0.5);
            let mut seated = false;
            for s in sizes.iter_mut() {
                let w = *s as f64 - 0.5;
                if u < w {
                    *s += 1;
                    seated = true;
                    break;
                }
                u -= w;
            }
            if !seated {
                sizes.push(1);
            }
        }
        *counts
            .entry(Composition::new(sizes).unwrap())
            .or_insert(0) += 1;
    }
    let mut crp_z = 0.0f64;
    for lam in constrained_compositions(5, &ones) {
        let expected = eppf_two_parameter(&lam, 0.5, 0.5).unwrap()
            * count_partitions_of_shape(&lam, &ones).unwrap() as f64;
        let freq = counts.get(&lam).copied().unwrap_or(0) as f64 / reps as f64;
        let se = (expected * (1.0 - expected) / reps as f64).sqrt().max(1e-12);
        crp_z = crp_z.max((freq - expected).abs() / se);
    }

    let pass = ewens_ok && sym_err < 1e-10 && crp_z < 4.0;
    verdict(
        9,
        "two-parameter family",
        pass,
        &format!(
            "ewens p(2,1)={e21:.12} p(1,2)={e12:.12}, symmetry err {sym_err:.2e} (< 1e-10), restaurant-oracle max |z| {crp_z:.2} (< 4)"
        ),
    );
}

#[test]
fn acceptance_10_chain_records() {
    let cfg = ChainRecordClt {
        dimension: 2,
        n_list: vec![1_000_000],
        reps: 1_000,
        seed: 42,
        threads: threads(),
        tolerances: Tolerances::default(),
    };
    let report = chain_record_clt(&cfg).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for check in report.rows[0].checks.iter() {
        pass &= check.pass;
        detail.push_str(&format!(
            "{}={:.4}[{}] ",
            check.name,
            check.value,
            if check.pass { "ok" } else { "FAIL" }
        ));
    }
    verdict(
        10,
        "chain records (mean in [0.9,1.1] x (log n)/2, var in [0.7,1.3] x (log n)/4)",
        pass,
        detail.trim_end(),
    );
}

#[test]
fn acceptance_11_continuous_time() {
    let cfg = CtimeJumpClt {
        model: FrequencyModel::parse("iid:uniform").unwrap(),
        rho: RealConstraintSeq::parse(";1").unwrap(),
        horizons: vec![(10.0f64).exp()],
        reps: 10_000,
        seed: 42,
        threads: threads(),
        tolerances: Tolerances::default(),
    };
    let report = ctime_jump_clt(&cfg).unwrap();
    let mean = report.rows[0].moments.as_ref().unwrap().mean;
    let mean_ok = (9.0..=11.0).contains(&mean);

    // Real-valued establishment counts run, and sojourns have the gamma
    // means rho_k / state.
    let audit = gamma_sojourn_audit(
        &FrequencyModel::parse("iid:uniform").unwrap(),
        &RealConstraintSeq::parse("0.5;0.5").unwrap(),
        100_000,
        42,
        threads(),
        3,
    )
    .unwrap();
    let pass = mean_ok && audit.pass;
    let zs: Vec<String> = audit
        .rows
        .iter()
        .map(|(k, _, _, z)| format!("z{k}={z:.2}"))
        .collect();
    verdict(
        11,
        "continuous time",
        pass,
        &format!(
            "mean jumps by e^10 = {mean:.3} (in [9,11]); fractional-rho sojourn {}",
            zs.join(" ")
        ),
    );
}

#[test]
fn acceptance_12_equal_probability_demo() {
    // Default demo model, 10^7 samples, ratio pinned to [0.98, 1.02].
    let model = equal_probability_default_model();
    let report =
        equal_probability_demo(&model, 10_000_000, 42, threads(), Some((0.98, 1.02))).unwrap();
    let mut detail = String::new();
    for row in &report.rows {
        for c in &row.checks {
            detail.push_str(&format!(
                "{}={:.5}[{}] ",
                c.name,
                c.value,
                if c.pass { "ok" } else { "FAIL" }
            ));
        }
    }
    // The op-level statement under uniform residuals: same exactness, the
    // empirical gate at four standard errors.
    let uniform = FrequencyModel::parse("iid:uniform").unwrap();
    let uni_report = equal_probability_demo(&uniform, 1_000_000, 42, threads(), None).unwrap();
    let pass = report.pass && uni_report.pass;
    verdict(12, "equal-probability demo", pass, detail.trim_end());
}

#[test]
fn acceptance_13_reproducibility() {
    let bin = env!("CARGO_BIN_EXE_rhopart");
    let dir = std::env::temp_dir().join("rhopart-acceptance13");
    std::fs::create_dir_all(&dir).unwrap();
    let out1 = dir.join("verify1.json");
    let out2 = dir.join("verify2.json");
    let mut outputs = Vec::new();
    for out in [&out1, &out2] {
        let result = std::process::Command::new(bin)
            .args([
                "verify",
                "--rho",
                ";1",
                "--model",
                "iid:uniform",
                "--seed",
                "42",
                "--threads",
                "2",
                "--out",
            ])
            .arg(out)
            .output()
            .expect("verify runs");
        assert!(
            result.status.success(),
            "verify exited nonzero:\n{}",
            String::from_utf8_lossy(&result.stdout)
        );
        outputs.push(result.stdout);
    }
    let json1 = std::fs::read(&out1).unwrap();
    let json2 = std::fs::read(&out2).unwrap();
    let pass = json1 == json2 && outputs[0] == outputs[1] && !json1.is_empty();
    verdict(
        13,
        "reproducibility",
        pass,
        &format!(
            "verify --seed 42 twice: {} report bytes identical, stdout identical",
            json1.len()
        ),
    );
}
