//! Theorem-level checkers: each pairs functional evaluators with the right
//! constant and decides pass/fail from interval enclosures, retrying at
//! doubled precision when the enclosures overlap. Includes the randomized
//! suite harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{
    f1_improved, f1_term, f2_improved, fkp_improved_grad_lhs, fkp_improved_lhs, fkp_lhs,
    hardy_classical_lhs, lp_norm_p, power_weighted_norm, uncertainty_sides, Ctx,
    UncertaintyBranch,
};
use crate::num::{rat, rat_int, Enclosure, Rat};
use crate::seqcore::{forward_difference, rearrange, Sequence};
use crate::weights::{weighted_average_monotone_check, WeightSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Result of one inequality check. `margin` is rhs.lo − lhs.hi of the
/// binding link (negative margins can still pass when consistent with
/// equality at the achieved precision).
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub theorem: String,
    pub p: Rat,
    pub lhs: Enclosure,
    pub rhs_scaled: Enclosure,
    pub margin: f64,
    pub verdict: Verdict,
    pub witness: Option<Sequence>,
    pub prec_used: u32,
}

impl CheckReport {
    fn attach_witness(mut self, seq: &Sequence) -> CheckReport {
        if self.verdict == Verdict::Fail {
            self.witness = Some(seq.clone());
        }
        self
    }
}

const LADDER_RUNGS: u32 = 3;

/// Evaluates a set of (lhs, rhs) links that must all satisfy lhs ≤ rhs.
/// Precision doubles while any link is undecided; at the final rung an
/// undecided link passes exactly when the overlap fits inside the combined
/// enclosure widths (the equality-consistent slack rule), which is the only
/// state an equality case can ever reach.
fn decide_ladder<F>(theorem: &str, p: &Rat, base_prec: u32, mut eval: F) -> Result<CheckReport>
where
    F: FnMut(&Ctx) -> Result<Vec<(Enclosure, Enclosure)>>,
{
    let mut prec = base_prec;
    for rung in 0..LADDER_RUNGS {
        let ctx = Ctx::new(prec);
        let links = eval(&ctx)?;
        if links.is_empty() {
            return Err(Error::Internal(format!("{theorem}: no links to check")));
        }
        // binding link: smallest rhs.lo − lhs.hi
        let mut binding = 0usize;
        let mut worst = f64::INFINITY;
        let mut any_fail = false;
        let mut all_pass = true;
        for (i, (lhs, rhs)) in links.iter().enumerate() {
            let m = (rhs.lo().to_f64()) - (lhs.hi().to_f64());
            if m < worst {
                worst = m;
                binding = i;
            }
            if lhs.certainly_gt(rhs) {
                any_fail = true;
            }
            if !lhs.certainly_le(rhs) {
                all_pass = false;
            }
        }
        let last = rung + 1 == LADDER_RUNGS;
        let verdict = if any_fail {
            Verdict::Fail
        } else if all_pass {
            Verdict::Pass
        } else if last {
            // No link is certainly violated, so every remaining overlap is
            // within slack = width(lhs) + width(rhs); treat as equality.
            Verdict::Pass
        } else {
            prec *= 2;
            continue;
        };
        let (lhs, rhs) = links.into_iter().nth(binding).unwrap();
        return Ok(CheckReport {
            theorem: theorem.to_string(),
            p: p.clone(),
            margin: worst,
            lhs,
            rhs_scaled: rhs,
            verdict,
            witness: None,
            prec_used: prec,
        });
    }
    unreachable!()
}

/// (p/(p−1))^p as an enclosure.
pub fn sharp_constant(p: &Rat, prec: u32) -> Enclosure {
    let base = Rat::from(p / Rat::from(p.clone() - rat_int(1)));
    Enclosure::from_rat(&base, prec).pow_rat(p)
}

/// Rearrangement lemma: the rearranged sequence has the same multiset of
/// absolute values (hence the same ℓ^p norm for every p), and its partial
/// sums of p-th powers dominate those of |ψ| for every cut m.
///
/// Decided exactly: sorted elementwise comparison of the prefix multisets
/// transfers through the monotone map t ↦ t^p, so the verdict is certain
/// for every real p ≥ 1 without evaluating any power.
pub fn check_lemma_rearrangement(seq: &Sequence, p: &Rat, prec: u32) -> Result<CheckReport> {
    if *p < 1 {
        return Err(Error::Input(format!("p must be at least 1, got {p}")));
    }
    let tilde = rearrange(seq);
    let mut sorted_abs: Vec<Rat> = seq
        .values()
        .iter()
        .map(|v| Rat::from(v.clone().abs()))
        .collect();
    sorted_abs.sort_unstable_by(|a, b| b.cmp(a));
    // the rearranged form drops trailing zeros
    while sorted_abs.last().is_some_and(|v| v.cmp0() == std::cmp::Ordering::Equal) {
        sorted_abs.pop();
    }
    let norm_ok = sorted_abs == tilde.values();

    let mut length_ok = true;
    let n = seq.support();
    for m in 1..=n {
        let mut prefix: Vec<Rat> = seq
            .values()
            .iter()
            .take(m)
            .map(|v| Rat::from(v.clone().abs()))
            .collect();
        prefix.sort_unstable_by(|a, b| b.cmp(a));
        if prefix
            .iter()
            .zip(tilde.values().iter().take(m))
            .any(|(a, b)| a > b)
        {
            length_ok = false;
            break;
        }
    }

    let ctx = Ctx::new(prec);
    let norm = lp_norm_p(&ctx, seq, p)?;
    let verdict = if norm_ok && length_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(CheckReport {
        theorem: "lemma-rearrangement".into(),
        p: p.clone(),
        lhs: norm.clone(),
        rhs_scaled: norm,
        margin: 0.0,
        verdict,
        witness: if verdict == Verdict::Fail {
            Some(seq.clone())
        } else {
            None
        },
        prec_used: prec,
    })
}

/// Weighted-average lemma on the rearranged sequence: for a valid weight
/// and 1 ≤ n ≤ m, (1/w(m))Σ_{k≤m}ψ̃(k) ≤ (1/w(n))Σ_{k≤n}ψ̃(k). Exact.
pub fn check_lemma_weighted_average(
    seq: &Sequence,
    w: &WeightSpec,
    n: u64,
    m: u64,
    prec: u32,
) -> Result<CheckReport> {
    let tilde = rearrange(seq);
    let holds = weighted_average_monotone_check(tilde.values(), w, n, m)?;
    let point = Enclosure::zero(prec);
    Ok(CheckReport {
        theorem: "lemma-weighted-average".into(),
        p: rat_int(1),
        lhs: point.clone(),
        rhs_scaled: point,
        margin: 0.0,
        verdict: if holds { Verdict::Pass } else { Verdict::Fail },
        witness: if holds { None } else { Some(seq.clone()) },
        prec_used: prec,
    })
}

/// Key proposition: sup_m |min(1/w(n), 1/w(m)) S(m)|^p is dominated by
/// the rearranged weighted average ((1/w(n)) Σ_{k≤n} ψ̃(k))^p.
pub fn check_prop31(
    seq: &Sequence,
    p: &Rat,
    w: &WeightSpec,
    n: u64,
    prec: u32,
) -> Result<CheckReport> {
    if *p < 1 {
        return Err(Error::Input(format!("p must be at least 1, got {p}")));
    }
    let tilde = rearrange(seq);
    let partial = tilde.partial_sum(n as usize);
    decide_ladder("prop-key", p, prec, |ctx| {
        let lhs = f1_term(ctx, seq, p, w, n)?;
        let w_n = w.eval_iv(n, ctx.prec)?;
        let rhs = Enclosure::from_rat(&partial, ctx.prec).div(&w_n).pow_rat(p);
        Ok(vec![(lhs, rhs)])
    })
    .map(|r| r.attach_witness(seq))
}

/// Improved Hardy inequality (sup/min form):
/// f1(ψ, p, linear) ≤ (p/(p−1))^p Σ|ψ|^p.
pub fn check_thm32(seq: &Sequence, p: &Rat, prec: u32) -> Result<CheckReport> {
    decide_ladder("thm-supmin-hardy", p, prec, |ctx| {
        let lhs = f1_improved(ctx, seq, p, &WeightSpec::Linear)?;
        let rhs = sharp_constant(p, ctx.prec).mul(&lp_norm_p(ctx, seq, p)?);
        Ok(vec![(lhs, rhs)])
    })
    .map(|r| r.attach_witness(seq))
}

/// Improved gradient Hardy inequality (max/sup form):
/// f2(ψ, p, 0) ≤ (p/(p−1))^p Σ|∇ψ|^p.
pub fn check_thm33(seq: &Sequence, p: &Rat, prec: u32) -> Result<CheckReport> {
    decide_ladder("thm-maxsup-hardy", p, prec, |ctx| {
        let lhs = f2_improved(ctx, seq, p, 0)?;
        let rhs = sharp_constant(p, ctx.prec)
            .mul(&lp_norm_p(ctx, &forward_difference(seq), p)?);
        Ok(vec![(lhs, rhs)])
    })
    .map(|r| r.attach_witness(seq))
}

/// Both improvement chains:
/// classical Hardy LHS ≤ f1 ≤ (p/(p−1))^p‖ψ‖_p^p and
/// Σ|ψ(n)|^p/n^p ≤ f2 ≤ (p/(p−1))^p‖∇ψ‖_p^p.
pub fn check_chain_sharper(seq: &Sequence, p: &Rat, prec: u32) -> Result<CheckReport> {
    decide_ladder("chain-sharper", p, prec, |ctx| {
        let c = sharp_constant(p, ctx.prec);
        let hardy = hardy_classical_lhs(ctx, seq, p)?;
        let f1 = f1_improved(ctx, seq, p, &WeightSpec::Linear)?;
        let norm = lp_norm_p(ctx, seq, p)?;
        let pw = power_weighted_norm(ctx, seq, p, 0)?;
        let f2 = f2_improved(ctx, seq, p, 0)?;
        let grad_norm = lp_norm_p(ctx, &forward_difference(seq), p)?;
        Ok(vec![
            (hardy, f1.clone()),
            (f1, c.mul(&norm)),
            (pw, f2.clone()),
            (f2, c.mul(&grad_norm)),
        ])
    })
    .map(|r| r.attach_witness(seq))
}

/// l-summed FKP-weighted improvement: Σ_l c_l f1(ψ, p, n^{(l+p)/p}) ≤ ‖ψ‖_p^p,
/// with the series truncation remainder folded into the LHS upper endpoint.
/// The weighted sum Σ v_p(n)|S(n)|^p must sit below the l-summed form too.
pub fn check_thm35(seq: &Sequence, p: u32, max_l: u32, prec: u32) -> Result<CheckReport> {
    let p_rat = rat_int(p as i64);
    decide_ladder("thm-fkp-supmin", &p_rat, prec, |ctx| {
        let lhs = fkp_improved_lhs(ctx, seq, p, max_l)?;
        let rhs = lp_norm_p(ctx, seq, &p_rat)?;
        let weighted = fkp_lhs(ctx, seq, &p_rat)?;
        Ok(vec![(lhs, rhs.clone()), (weighted, rhs)])
    })
    .map(|r| r.attach_witness(seq))
}

/// Gradient counterpart: Σ_l c_l f2(ψ, p, l) ≤ ‖∇ψ‖_p^p.
pub fn check_thm36(seq: &Sequence, p: u32, max_l: u32, prec: u32) -> Result<CheckReport> {
    let p_rat = rat_int(p as i64);
    decide_ladder("thm-fkp-maxsup", &p_rat, prec, |ctx| {
        let lhs = fkp_improved_grad_lhs(ctx, seq, p, max_l)?;
        let rhs = lp_norm_p(ctx, &forward_difference(seq), &p_rat)?;
        Ok(vec![(lhs, rhs)])
    })
    .map(|r| r.attach_witness(seq))
}

/// Uncertainty principle: the suffix branch in full and the prefix branch
/// at the given truncation level.
pub fn check_thm41(seq: &Sequence, p: &Rat, truncation: u64, prec: u32) -> Result<CheckReport> {
    decide_ladder("thm-uncertainty", p, prec, |ctx| {
        let (sl, sr) = uncertainty_sides(ctx, seq, p, UncertaintyBranch::Suffix, truncation)?;
        let (pl, pr) = uncertainty_sides(ctx, seq, p, UncertaintyBranch::Prefix, truncation)?;
        Ok(vec![(sl, sr), (pl, pr)])
    })
    .map(|r| r.attach_witness(seq))
}

// ---- random sequence generators -------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    DenseUniform,
    Sparse,
    SignedInteger,
    HeavyTail,
    AdversarialSign,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 5] = [
        GeneratorKind::DenseUniform,
        GeneratorKind::Sparse,
        GeneratorKind::SignedInteger,
        GeneratorKind::HeavyTail,
        GeneratorKind::AdversarialSign,
    ];

    pub fn parse(s: &str) -> Result<GeneratorKind> {
        match s {
            "dense_uniform" => Ok(GeneratorKind::DenseUniform),
            "sparse" => Ok(GeneratorKind::Sparse),
            "signed_integer" => Ok(GeneratorKind::SignedInteger),
            "heavy_tail" => Ok(GeneratorKind::HeavyTail),
            "adversarial_sign" => Ok(GeneratorKind::AdversarialSign),
            other => Err(Error::Input(format!("unknown generator kind '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub max_support: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, max_support: usize, seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            kind,
            max_support,
            seed,
        }
    }

    /// Deterministic per (seed, case index); all values are exact rationals.
    pub fn generate(&self, case: u64) -> Sequence {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (case.wrapping_mul(0x9e3779b97f4a7c15)));
        let support = rng.gen_range(1..=self.max_support.max(1));
        let values: Vec<Rat> = match self.kind {
            GeneratorKind::DenseUniform => (0..support)
                .map(|_| rat(rng.gen_range(-1000i64..=1000), 1000))
                .collect(),
            GeneratorKind::Sparse => (0..support)
                .map(|_| {
                    if rng.gen_range(0..5) == 0 {
                        rat_int(rng.gen_range(-20i64..=20))
                    } else {
                        Rat::new()
                    }
                })
                .collect(),
            GeneratorKind::SignedInteger => (0..support)
                .map(|_| rat_int(rng.gen_range(-10i64..=10)))
                .collect(),
            GeneratorKind::HeavyTail => (0..support)
                .map(|_| {
                    // truncated Pareto-like magnitudes so suprema wander
                    let u: f64 = rng.gen_range(0.01..1.0);
                    let mag = (1.0 / u.powf(1.5)).min(1e4) as i64;
                    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                    rat_int(sign * mag)
                })
                .collect(),
            GeneratorKind::AdversarialSign => {
                // slowly growing magnitudes with sign flips in blocks
                let mut sign = 1i64;
                let mut block = 0usize;
                (0..support)
                    .map(|i| {
                        if block == 0 {
                            block = rng.gen_range(1..=4);
                            sign = -sign;
                        }
                        block -= 1;
                        rat(sign * (i as i64 + rng.gen_range(0i64..=3)), 3)
                    })
                    .collect()
            }
        };
        Sequence::from_values(values)
    }
}

// ---- suite runner ----------------------------------------------------------

pub const CHECK_NAMES: [&str; 9] = [
    "lemma21", "lemma22", "prop31", "thm32", "thm33", "chain", "thm35", "thm36", "thm41",
];

#[derive(Clone, Debug, Serialize)]
pub struct CheckCounts {
    pub check: String,
    pub pass: u64,
    pub fail: u64,
    pub inconclusive: u64,
    pub worst_margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessRecord {
    pub check: String,
    pub p: String,
    pub values: Vec<String>,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub cases: u64,
    pub generator: GeneratorKind,
    pub checks: Vec<CheckCounts>,
    pub witnesses: Vec<WitnessRecord>,
}

impl SuiteReport {
    pub fn total_fail(&self) -> u64 {
        self.checks.iter().map(|c| c.fail).sum()
    }

    pub fn total_inconclusive(&self) -> u64 {
        self.checks.iter().map(|c| c.inconclusive).sum()
    }

    /// 0 = all pass, 1 = certified violation, 3 = inconclusive remains.
    pub fn exit_code(&self) -> i32 {
        if self.total_fail() > 0 {
            1
        } else if self.total_inconclusive() > 0 {
            3
        } else {
            0
        }
    }
}

/// Runs the named checks over `cases` generated sequences crossed with the
/// p-grid. Cases run concurrently; aggregation is keyed by case index so
/// the same seed always produces the identical report.
pub fn run_suite(
    gen: &GeneratorSpec,
    p_grid: &[Rat],
    checks: &[String],
    cases: u64,
    prec: u32,
) -> Result<SuiteReport> {
    for c in checks {
        if !CHECK_NAMES.contains(&c.as_str()) {
            return Err(Error::Input(format!("unknown check identifier '{c}'")));
        }
    }
    let per_case: Vec<Vec<CheckReport>> = (0..cases)
        .into_par_iter()
        .map(|case| -> Result<Vec<CheckReport>> {
            let seq = gen.generate(case);
            let mut rng = ChaCha8Rng::seed_from_u64(gen.seed ^ case ^ 0xabcdef);
            let mut out = Vec::new();
            for p in p_grid {
                for check in checks {
                    let report = match check.as_str() {
                        "lemma21" => {
                            if *p < 1 {
                                continue;
                            }
                            check_lemma_rearrangement(&seq, p, prec)?
                        }
                        "lemma22" => {
                            let w = random_weight(&mut rng);
                            let m = rng.gen_range(1..=2 * gen.max_support as u64);
                            let n = rng.gen_range(1..=m);
                            check_lemma_weighted_average(&seq, &w, n, m, prec)?
                        }
                        "prop31" => {
                            if *p < 1 {
                                continue;
                            }
                            let w = random_weight(&mut rng);
                            let n = rng.gen_range(1..=2 * gen.max_support as u64);
                            check_prop31(&seq, p, &w, n, prec)?
                        }
                        "thm32" => {
                            if *p <= 1 {
                                continue;
                            }
                            check_thm32(&seq, p, prec)?
                        }
                        "thm33" => {
                            if *p <= 1 {
                                continue;
                            }
                            check_thm33(&seq, p, prec)?
                        }
                        "chain" => {
                            if *p <= 1 {
                                continue;
                            }
                            check_chain_sharper(&seq, p, prec)?
                        }
                        "thm35" | "thm36" => {
                            let ip = match integer_p_at_least_2(p) {
                                Some(ip) => ip,
                                None => continue,
                            };
                            if check.as_str() == "thm35" {
                                check_thm35(&seq, ip, 20, prec)?
                            } else {
                                check_thm36(&seq, ip, 20, prec)?
                            }
                        }
                        "thm41" => {
                            if *p <= 1 {
                                continue;
                            }
                            check_thm41(&seq, p, 1000, prec)?
                        }
                        _ => unreachable!(),
                    };
                    out.push(report);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counts: Vec<CheckCounts> = checks
        .iter()
        .map(|c| CheckCounts {
            check: c.clone(),
            pass: 0,
            fail: 0,
            inconclusive: 0,
            worst_margin: f64::INFINITY,
        })
        .collect();
    let mut witnesses = Vec::new();
    for reports in &per_case {
        for r in reports {
            let slot = counts
                .iter_mut()
                .find(|c| check_slot(&r.theorem) == c.check)
                .expect("report maps to a requested check");
            match r.verdict {
                Verdict::Pass => slot.pass += 1,
                Verdict::Fail => slot.fail += 1,
                Verdict::Inconclusive => slot.inconclusive += 1,
            }
            if r.margin < slot.worst_margin {
                slot.worst_margin = r.margin;
            }
            if let Some(w) = &r.witness {
                witnesses.push(WitnessRecord {
                    check: check_slot(&r.theorem).to_string(),
                    p: r.p.to_string(),
                    values: w.values().iter().map(|v| v.to_string()).collect(),
                    margin: r.margin,
                });
            }
        }
    }
    Ok(SuiteReport {
        seed: gen.seed,
        cases,
        generator: gen.kind,
        checks: counts,
        witnesses,
    })
}

fn check_slot(theorem: &str) -> &'static str {
    match theorem {
        "lemma-rearrangement" => "lemma21",
        "lemma-weighted-average" => "lemma22",
        "prop-key" => "prop31",
        "thm-supmin-hardy" => "thm32",
        "thm-maxsup-hardy" => "thm33",
        "chain-sharper" => "chain",
        "thm-fkp-supmin" => "thm35",
        "thm-fkp-maxsup" => "thm36",
        "thm-uncertainty" => "thm41",
        _ => "unknown",
    }
}

fn integer_p_at_least_2(p: &Rat) -> Option<u32> {
    if *p.denom() == 1 {
        let n = p.numer().to_u32()?;
        if n >= 2 {
            return Some(n);
        }
    }
    None
}

fn random_weight(rng: &mut ChaCha8Rng) -> WeightSpec {
    match rng.gen_range(0..3) {
        0 => WeightSpec::Linear,
        1 => WeightSpec::Power(rat_int(rng.gen_range(1i64..=3))),
        _ => WeightSpec::Power(rat(rng.gen_range(4i64..=12), 4)),
    }
}
