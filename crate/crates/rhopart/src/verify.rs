//! The all-in-one verification suite behind `rhopart verify`: counting
//! oracles, exact-law identities, sampler agreement, and the statistical
//! experiments, each reduced to named pass/fail checks.
//!
//! `Quick` runs a desk-scale pass in seconds. `Full` runs the experiments
//! at their headline sizes (the block-count experiment at n = 10^6 with
//! 10^4 replicates), which takes minutes.

use serde::{Deserialize, Serialize};

use crate::composition::{constrained_compositions, Composition};
use crate::counting::{count_extensions, count_partitions_of_shape, enumerate_partitions};
use crate::error::Result;
use crate::experiments::{
    block_count_clt, chain_record_clt, consistency_audit, ctime_jump_clt,
    equal_probability_demo, gamma_sojourn_audit, growth_gate, sampler_agreement,
    uniformity_audit, BlockCountClt, ChainRecordClt, Check, CtimeJumpClt, Tolerances,
};
use crate::freq::FrequencyModel;
use crate::laws::{
    decrement_matrix, eppf_two_parameter, formation_probability_monte_carlo,
    shape_probability_monte_carlo, shape_probability_product, PMethod,
};
use crate::rho::{ConstraintSeq, RealConstraintSeq};
use crate::samplers::sample_partition;
use crate::stream::RandomStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub rho: ConstraintSeq,
    pub model: FrequencyModel,
    pub seed: u64,
    pub threads: usize,
    pub level: VerifyLevel,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteCheck {
    pub section: String,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub level: VerifyLevel,
    pub rho: String,
    pub model: String,
    pub notes: Vec<String>,
    pub checks: Vec<SuiteCheck>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The verdict table, one line per check.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{}  {:<22} {:<34} value={:.6} band=[{:.6}, {:.6}]\n",
                if c.check.pass { "PASS" } else { "FAIL" },
                c.section,
                c.check.name,
                c.check.value,
                c.check.lo,
                c.check.hi
            ));
        }
        out.push_str(&format!(
            "{}  overall ({} checks)\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.checks.len()
        ));
        out
    }
}

struct Suite {
    report: VerifyReport,
}

impl Suite {
    fn add(&mut self, section: &str, check: Check) {
        self.report.pass &= check.pass;
        self.report.checks.push(SuiteCheck {
            section: section.into(),
            check,
        });
    }

    fn flag(&mut self, section: &str, name: &str, ok: bool) {
        self.add(section, Check::band(name, f64::from(ok), 1.0, 1.0));
    }
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let quick = cfg.level == VerifyLevel::Quick;
    let tol = &cfg.tolerances;
    let mut suite = Suite {
        report: VerifyReport {
            seed: cfg.seed,
            level: cfg.level,
            rho: cfg.rho.to_string(),
            model: cfg.model.to_string(),
            notes: Vec::new(),
            checks: Vec::new(),
            pass: true,
        },
    };

    // --- Counting: closed-form shape counts against enumeration.
    {
        let n_max = if quick { 6 } else { 8 };
        let mut ok = true;
        for n in 1..=n_max {
            let all = enumerate_partitions(n, &cfg.rho)?;
            let mut total = 0u128;
            for shape in constrained_compositions(n, &cfg.rho) {
                let d = count_partitions_of_shape(&shape, &cfg.rho)?;
                let brute = all.iter().filter(|p| &p.shape() == &shape).count() as u128;
                ok &= d == brute;
                total += d;
            }
            ok &= total == all.len() as u128;
        }
        suite.flag("counting", "shape_counts_match_enumeration", ok);
    }

    // --- Extension counts: formula vs brute force, all representatives.
    {
        let (np_max, n_max) = if quick { (4, 6) } else { (5, 8) };
        let mut ok = true;
        for n in 2..=n_max {
            let big_all = enumerate_partitions(n, &cfg.rho)?;
            for np in 1..n.min(np_max + 1) {
                for small in enumerate_partitions(np, &cfg.rho)? {
                    let lam = small.shape();
                    for mu in constrained_compositions(n, &cfg.rho) {
                        if mu.num_parts() < lam.num_parts() {
                            continue;
                        }
                        let formula = count_extensions(&lam, &mu, &cfg.rho)?;
                        let brute = big_all
                            .iter()
                            .filter(|b| {
                                b.shape() == mu
                                    && b.restrict(np as usize).expect("np <= n") == small
                            })
                            .count() as u128;
                        ok &= formula == brute;
                    }
                }
            }
        }
        suite.flag("counting", "extension_counts_match_brute_force", ok);
    }

    // --- Kernel consistency for deterministic tail-mass models.
    {
        let models = [
            FrequencyModel::parse("fixed:0.5,0.25;geom=0.5")?,
            FrequencyModel::parse("fixed:0.6,0.3,0.1;geom=0.3")?,
            FrequencyModel::parse("iid:point(0.5)")?,
        ];
        let n_max = if quick { 6 } else { 7 };
        let mut worst = 0.0f64;
        for model in &models {
            for n in 2..=n_max {
                worst = worst.max(consistency_audit(model, &cfg.rho, n)?);
            }
        }
        suite.add(
            "kernel",
            Check::band("consistency_max_deviation", worst, 0.0, tol.audit_max_deviation),
        );
    }

    // --- Conditional uniformity given the shape.
    {
        let (n, reps) = if quick { (5, 50_000) } else { (6, 200_000) };
        let audit = uniformity_audit(&cfg.model, &cfg.rho, n, reps, cfg.seed)?;
        suite.add(
            "uniformity",
            Check::band(
                "min_p_value",
                audit.min_p_value,
                tol.uniformity_min_pvalue,
                1.0,
            ),
        );
    }

    // --- Paintbox and sequential sampler agreement.
    {
        let (n, reps) = if quick { (5, 100_000) } else { (6, 1_000_000) };
        let agreement =
            sampler_agreement(&cfg.model, &cfg.rho, n, reps, cfg.seed, cfg.threads)?;
        // The TV noise floor scales like 1/sqrt(reps); the configured
        // bound is calibrated for 10^6 samples per sampler.
        let tv_bound = tol.sampler_tv_max * (1_000_000f64 / reps as f64).sqrt();
        suite.add(
            "paintbox",
            Check::band("total_variation", agreement.total_variation, 0.0, tv_bound),
        );
        suite.add(
            "paintbox",
            Check::band(
                "record_structure_violations",
                agreement.record_violations as f64,
                0.0,
                0.0,
            ),
        );
    }

    // --- Product formula (when the model has beta residuals).
    if cfg.model.has_beta_residuals() {
        let mut norm_err = 0.0f64;
        for n in 1..=6u64 {
            let total: f64 = constrained_compositions(n, &cfg.rho)
                .iter()
                .map(|lam| shape_probability_product(lam, &cfg.rho, &cfg.model))
                .sum::<Result<f64>>()?;
            norm_err = norm_err.max((total - 1.0).abs());
        }
        suite.add(
            "product-law",
            Check::band("normalization_error", norm_err, 0.0, 1e-10),
        );

        let n_max = if quick { 60 } else { 100 };
        let mut row_err = 0.0f64;
        let mut pascal_err = 0.0f64;
        for k in 1..=3usize {
            let (a, b) = cfg.model.residual_beta_at(k).expect("beta residuals");
            let m = decrement_matrix(cfg.rho.get(k), a, b, n_max)?;
            row_err = row_err.max(m.max_row_sum_deviation());
            pascal_err = pascal_err.max(m.max_pascal_residual());
        }
        suite.add(
            "product-law",
            Check::band("decrement_row_sum_error", row_err, 0.0, 1e-12),
        );
        suite.add(
            "product-law",
            Check::band("decrement_pascal_residual", pascal_err, 0.0, 1e-12),
        );

        // Monte-Carlo agreement for every shape of a small n.
        let mut stream = RandomStream::with_stream(cfg.seed, 0x9C0F);
        let reps = if quick { 40_000 } else { 200_000 };
        let mut worst_z = 0.0f64;
        for lam in constrained_compositions(4, &cfg.rho) {
            let exact = shape_probability_product(&lam, &cfg.rho, &cfg.model)?;
            let est = shape_probability_monte_carlo(
                &lam,
                &cfg.rho,
                &cfg.model,
                reps,
                &mut stream,
                PMethod::ShapeFrequency,
            )?;
            worst_z = worst_z.max(est.z_against(exact));
        }
        suite.add(
            "product-law",
            Check::band("monte_carlo_max_z", worst_z, 0.0, tol.monte_carlo_z),
        );
    } else {
        suite.report.notes.push(
            "product-law section skipped: model does not have beta residual fractions".into(),
        );
    }

    // --- Formation law vs empirical formation-sequence prefixes.
    {
        let reps = if quick { 100_000 } else { 1_000_000 };
        let shapes = formation_test_shapes(&cfg.rho);
        let mut worst_z = 0.0f64;
        let mut stream = RandomStream::with_stream(cfg.seed, 0xF0F0);
        for lam in &shapes {
            let q = formation_probability_monte_carlo(
                lam,
                &cfg.rho,
                &cfg.model,
                reps / 4,
                &mut stream,
            )?;
            let n = lam.total() as usize;
            let mut hits = 0u64;
            for _ in 0..reps {
                let p = sample_partition(&cfg.model, &cfg.rho, n, &mut stream)?;
                if formation_matches(&p.formation_sequence(&cfg.rho), lam) {
                    hits += 1;
                }
            }
            let freq = hits as f64 / reps as f64;
            let se_emp = (freq * (1.0 - freq) / reps as f64).sqrt();
            let se = (se_emp * se_emp + q.std_error * q.std_error).sqrt().max(1e-12);
            worst_z = worst_z.max((freq - q.value).abs() / se);
        }
        suite.add(
            "formation",
            Check::band("empirical_max_z", worst_z, 0.0, tol.monte_carlo_z),
        );
    }

    // --- Two-parameter family.
    {
        let e21 = eppf_two_parameter(&Composition::parse("2,1")?, 0.0, 1.0)?;
        let e12 = eppf_two_parameter(&Composition::parse("1,2")?, 0.0, 1.0)?;
        suite.add(
            "two-parameter",
            Check::band("ewens_2_1", e21, 1.0 / 6.0 - 1e-12, 1.0 / 6.0 + 1e-12),
        );
        suite.add(
            "two-parameter",
            Check::band("ewens_1_2", e12, 1.0 / 6.0 - 1e-12, 1.0 / 6.0 + 1e-12),
        );
        let ones = ConstraintSeq::ones();
        let mut sym_err = 0.0f64;
        for n in 2..=5u64 {
            for lam in constrained_compositions(n, &ones) {
                let mut rev = lam.parts().to_vec();
                rev.reverse();
                let a = eppf_two_parameter(&lam, 0.5, 0.5)?;
                let b = eppf_two_parameter(&Composition::new(rev)?, 0.5, 0.5)?;
                sym_err = sym_err.max((a - b).abs());
            }
        }
        suite.add(
            "two-parameter",
            Check::band("part_symmetry_error", sym_err, 0.0, 1e-10),
        );
    }

    // --- Growth diagnostic for rho.
    {
        let gate = growth_gate(&cfg.rho, 1000);
        suite.flag("growth-gate", "log_sum_over_k_vanishes", gate.pass);
    }

    // --- Block-count experiment.
    {
        let clt_cfg = BlockCountClt {
            model: cfg.model.clone(),
            rho: cfg.rho.clone(),
            n_list: vec![if quick { 10_000 } else { 1_000_000 }],
            reps: if quick { 2_000 } else { 10_000 },
            seed: cfg.seed,
            threads: cfg.threads,
            tolerances: tol.clone(),
        };
        match clt_cfg.model.log_moments() {
            Ok(_) => {
                let outcome = block_count_clt(&clt_cfg)?;
                for check in outcome.report.rows[0].checks.iter() {
                    let gate_all = !quick;
                    if gate_all || check.name.starts_with("mean") || check.name.starts_with("var")
                    {
                        suite.add("block-count-clt", check.clone());
                    } else {
                        // At desk scale the third and fourth moments are
                        // still far from their Gaussian limits (they decay
                        // like 1/sqrt(log n)); record them without gating.
                        suite.report.notes.push(format!(
                            "block-count-clt diagnostic (not gated at quick level): {} = {:.4}",
                            check.name, check.value
                        ));
                    }
                }
            }
            Err(_) => suite.report.notes.push(
                "block-count-clt skipped: model has no finite log moments (not iid stick-breaking)"
                    .into(),
            ),
        }
    }

    // --- Chain records.
    {
        let chain_cfg = ChainRecordClt {
            dimension: 2,
            n_list: vec![if quick { 50_000 } else { 1_000_000 }],
            reps: if quick { 500 } else { 1_000 },
            seed: cfg.seed,
            threads: cfg.threads,
            tolerances: tol.clone(),
        };
        let report = chain_record_clt(&chain_cfg)?;
        for check in report.rows[0].checks.iter() {
            if quick && check.name.starts_with("mean") {
                // The mean reaches (log n)/d only at O(1/log n) speed; at
                // desk scale the offset still dominates the band.
                suite.report.notes.push(format!(
                    "chain-record diagnostic (not gated at quick level): {} = {:.4}",
                    check.name, check.value
                ));
            } else {
                suite.add("chain-records", check.clone());
            }
        }
    }

    // --- Continuous time.
    {
        let rho_real = RealConstraintSeq::from(&cfg.rho);
        match cfg.model.log_moments() {
            Ok(_) => {
                let ct_cfg = CtimeJumpClt {
                    model: cfg.model.clone(),
                    rho: rho_real,
                    horizons: vec![if quick { (8.0f64).exp() } else { (10.0f64).exp() }],
                    reps: if quick { 2_000 } else { 10_000 },
                    seed: cfg.seed,
                    threads: cfg.threads,
                    tolerances: tol.clone(),
                };
                let report = ctime_jump_clt(&ct_cfg)?;
                for check in report.rows[0].checks.iter() {
                    suite.add("continuous-time", check.clone());
                }
            }
            Err(_) => suite
                .report
                .notes
                .push("continuous-time skipped: model has no finite log moments".into()),
        }
        let frac = RealConstraintSeq::parse("0.5;0.5")?;
        let audit = gamma_sojourn_audit(
            &FrequencyModel::uniform_stick(),
            &frac,
            if quick { 20_000 } else { 100_000 },
            cfg.seed,
            cfg.threads,
            3,
        )?;
        let worst = audit
            .rows
            .iter()
            .map(|(_, _, _, z)| z.abs())
            .fold(0.0, f64::max);
        suite.add(
            "continuous-time",
            Check::band("fractional_rho_sojourn_max_z", worst, 0.0, tol.monte_carlo_z),
        );
    }

    // --- Equal-probability demonstration.
    {
        let demo_model = crate::experiments::equal_probability_default_model();
        let reps = if quick { 500_000 } else { 10_000_000 };
        let band = if quick {
            None
        } else {
            Some(tol.equal_prob_ratio)
        };
        let report = equal_probability_demo(&demo_model, reps, cfg.seed, cfg.threads, band)?;
        for row in &report.rows {
            for check in &row.checks {
                suite.add("equal-probability", check.clone());
            }
        }
    }

    Ok(suite.report)
}

fn formation_matches(formation: &[usize], shape: &Composition) -> bool {
    if formation.len() != shape.num_parts() {
        return false;
    }
    let mut sum = 0u64;
    for (f, &p) in formation.iter().zip(shape.parts()) {
        sum += p;
        if *f as u64 != sum {
            return false;
        }
    }
    true
}

/// Shapes in the formation-law domain (first part exactly rho_1, the rest
/// at least their establishment counts) with small totals.
fn formation_test_shapes(rho: &ConstraintSeq) -> Vec<Composition> {
    let r1 = rho.get(1);
    let r2 = rho.get(2);
    let r3 = rho.get(3);
    vec![
        Composition::new(vec![r1, r2]).unwrap(),
        Composition::new(vec![r1, r2 + 1]).unwrap(),
        Composition::new(vec![r1, r2, r3 + 1]).unwrap(),
    ]
}
