//! Confronts two presentations of one sequence with Cobham's theorem.
//!
//! Each side is normalized, the images are compared to a fixed depth, the
//! dominating eigenvalues are tested for independence and, when they are
//! independent, the common prefix is searched for a period.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::independence::{self, IndependenceVerdict};
use crate::language;
use crate::normalize::{self, Sidecar};
use crate::periodicity::{self, PeriodicityCertificate};
use crate::spectral::PerronValue;
use crate::system::{compare_images, Agreement, SubstitutionSystem};
use crate::words::{Alphabet, Letter, Morphism, Word};

/// Lazy comparison of the two images on the first `n` letters.
pub fn prefix_agreement(a: &SubstitutionSystem, b: &SubstitutionSystem, n: usize) -> Result<Agreement> {
    compare_images(a, b, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CobhamOptions {
    pub depth: usize,
    pub bound: u32,
    pub max_preperiod: Option<usize>,
    pub max_period: Option<usize>,
    /// Longest recurrent factor whose gaps are profiled.
    pub gap_factor_len: usize,
}

impl Default for CobhamOptions {
    fn default() -> Self {
        CobhamOptions {
            depth: 100_000,
            bound: independence::DEFAULT_BOUND,
            max_preperiod: None,
            max_period: None,
            gap_factor_len: 2,
        }
    }
}

/// Max-gap profile of one recurrent factor. Always evidence, never proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapEvidence {
    pub factor: String,
    pub profile: Vec<(usize, Option<usize>)>,
    /// The gap did not move over the last two checkpoints.
    pub plateau: bool,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub label: String,
    pub normalization: Sidecar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub depth: usize,
    pub independence_bound: u32,
    pub max_preperiod: usize,
    pub max_period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Conclusion {
    ConsistentPeriodic,
    ConsistentDependent,
    /// Agreement, independence and no period, all within the stated bounds.
    TheoremTension { details: String },
    Inconclusive { reason: String },
}

impl Conclusion {
    pub fn exit_code(&self) -> i32 {
        match self {
            Conclusion::ConsistentPeriodic | Conclusion::ConsistentDependent => 0,
            Conclusion::TheoremTension { .. } => 4,
            Conclusion::Inconclusive { .. } => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CobhamReport {
    pub sides: [Side; 2],
    pub prefix_agreement: Agreement,
    /// Dominating eigenvalues of the normalized substitutions.
    pub eigenvalues: [PerronValue; 2],
    pub independence: Option<IndependenceVerdict>,
    pub periodicity: Option<PeriodicityCertificate>,
    pub bounded_gaps: Vec<GapEvidence>,
    /// Both systems are pure and prolongable on the same letter of the same
    /// alphabet, so the fixed-point form of the statement applies too.
    pub same_fixed_point_setting: bool,
    pub bounds: Bounds,
    pub conclusion: Conclusion,
}

impl CobhamReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("bad report: {e}")))
    }
}

fn gap_evidence(x: &[Letter], out: &Alphabet, max_len: usize) -> Result<Vec<GapEvidence>> {
    let n = x.len();
    let checkpoints = [n / 4, n / 2, n];
    let mut rows = Vec::new();
    for len in 1..=max_len {
        for u in language::recurrent_factors_prefix(x, len, 0.5) {
            let profile = language::max_gap_profile_prefix(x, &u, &checkpoints)?;
            let plateau = profile[1].1.is_some() && profile[1].1 == profile[2].1;
            rows.push(GapEvidence {
                factor: out.render(&u),
                profile,
                plateau,
                status: "EVIDENCE".into(),
            });
        }
    }
    Ok(rows)
}

fn same_fixed_point_setting(a: &SubstitutionSystem, b: &SubstitutionSystem) -> bool {
    a.phi().is_identity()
        && b.phi().is_identity()
        && a.alphabet().tokens() == b.alphabet().tokens()
        && a.start() == b.start()
}

pub fn cobham_check(a: &SubstitutionSystem, b: &SubstitutionSystem, opts: &CobhamOptions) -> Result<CobhamReport> {
    let n = opts.depth;
    let na = normalize::normalize(a)?;
    let nb = normalize::normalize(b)?;
    let sides = [
        Side { label: a.label().to_string(), normalization: na.sidecar()? },
        Side { label: b.label().to_string(), normalization: nb.sidecar()? },
    ];
    let eigenvalues = [
        sides[0].normalization.eigenvalue_after.clone(),
        sides[1].normalization.eigenvalue_after.clone(),
    ];
    let max_pre = opts.max_preperiod.unwrap_or(n / 4);
    let max_per = opts.max_period.unwrap_or(n / 4);
    let bounds = Bounds {
        depth: n,
        independence_bound: opts.bound,
        max_preperiod: max_pre,
        max_period: max_per,
    };
    let mut report = CobhamReport {
        sides,
        prefix_agreement: prefix_agreement(&na.system, &nb.system, n)?,
        eigenvalues,
        independence: None,
        periodicity: None,
        bounded_gaps: Vec::new(),
        same_fixed_point_setting: same_fixed_point_setting(a, b),
        bounds,
        conclusion: Conclusion::Inconclusive { reason: String::new() },
    };
    if let Some(i) = report.prefix_agreement.mismatch {
        report.conclusion = Conclusion::Inconclusive {
            reason: format!("not the same sequence: images differ at index {i}"),
        };
        return Ok(report);
    }
    let verdict = match independence::perron_mult_indep(&report.eigenvalues[0], &report.eigenvalues[1], opts.bound) {
        Ok(v) => v,
        Err(Error::InvalidArgument(reason)) => {
            report.conclusion = Conclusion::Inconclusive { reason };
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let dependent = verdict.is_dependent();
    report.independence = Some(verdict);
    if dependent {
        report.conclusion = Conclusion::ConsistentDependent;
        return Ok(report);
    }
    let x = na.system.image_prefix(n)?;
    let cert = periodicity::detect_ultimate_periodicity(&x, Some(max_pre), Some(max_per))?;
    report.periodicity = Some(cert);
    report.bounded_gaps = gap_evidence(&x, na.system.output_alphabet(), opts.gap_factor_len)?;
    report.conclusion = match cert {
        PeriodicityCertificate::Periodic { .. } => Conclusion::ConsistentPeriodic,
        PeriodicityCertificate::NoPeriodFound { .. } => Conclusion::TheoremTension {
            details: format!(
                "images agree to {n}, no multiplicative relation with exponents up to {}, \
                 no period up to {max_per} after a preperiod up to {max_pre}",
                opts.bound
            ),
        },
    };
    Ok(report)
}

/// A `p`-uniform presentation of `u v^ω`.
///
/// Letters are position classes: one per preperiod position and one per
/// residue of the period. Position `i` maps to positions `pi..pi+p`, which
/// is well defined on classes because `pQ ≡ 0 mod Q`.
pub fn periodic_presentation(
    p: usize,
    u: &[Letter],
    v: &[Letter],
    output: &Alphabet,
    label: &str,
) -> Result<SubstitutionSystem> {
    if p < 2 || v.is_empty() {
        return Err(Error::InvalidArgument("need p >= 2 and a non-empty period".into()));
    }
    let (pre, per) = (u.len(), v.len());
    if pre + per > 255 {
        return Err(Error::Alphabet("too many position classes".into()));
    }
    let class = |i: usize| -> Letter {
        if i < pre {
            i as Letter
        } else {
            (pre + (i - pre) % per) as Letter
        }
    };
    let tokens: Vec<String> = (0..pre)
        .map(|i| format!("u{i}"))
        .chain((0..per).map(|r| format!("v{r}")))
        .collect();
    let domain = Alphabet::new(tokens)?;
    let reps: Vec<usize> = (0..pre + per).collect();
    let images: Vec<Word> = reps
        .iter()
        .map(|&i| (p * i..p * i + p).map(class).collect::<Vec<_>>().into())
        .collect();
    let sigma = Morphism::endo(domain.clone(), images)?;
    let coding: Vec<Word> = u.iter().chain(v).map(|&c| Word::from(vec![c])).collect();
    let phi = Morphism::new(domain, output.clone(), coding)?;
    SubstitutionSystem::new(sigma, 0, Some(phi), label)
}

/// Two presentations of one ultimately periodic sequence with
/// multiplicatively independent integer eigenvalues.
#[derive(Debug, Clone)]
pub struct FuzzCase {
    pub p: u64,
    pub q: u64,
    pub preperiod: Word,
    pub period: Word,
    pub a: SubstitutionSystem,
    pub b: SubstitutionSystem,
}

/// Deterministic in `seed`. The second side re-presents the sequence with a
/// longer preperiod and a multiple of the period.
pub fn fuzz_cases(seed: u64, count: usize) -> Result<Vec<FuzzCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = rng.gen_range(2..=9u64);
        let q = rng.gen_range(2..=9u64);
        let verdict = independence::integer_mult_indep(&p.into(), &q.into())?;
        if verdict.is_dependent() {
            continue;
        }
        let k = rng.gen_range(2..=3usize);
        let output = Alphabet::numbered(k)?;
        let pre_len = rng.gen_range(0..=6usize);
        let per_len = rng.gen_range(1..=5usize);
        let letters: Vec<Letter> = (0..k as Letter).collect();
        let u: Vec<Letter> = (0..pre_len).map(|_| *letters.choose(&mut rng).unwrap()).collect();
        let v: Vec<Letter> = (0..per_len).map(|_| *letters.choose(&mut rng).unwrap()).collect();
        let shift = rng.gen_range(0..=3usize);
        let reps = rng.gen_range(1..=2usize);
        let y = |i: usize| if i < pre_len { u[i] } else { v[(i - pre_len) % per_len] };
        let u2: Vec<Letter> = (0..pre_len + shift).map(y).collect();
        let v2: Vec<Letter> = (pre_len + shift..pre_len + shift + per_len * reps).map(y).collect();
        let i = out.len();
        let a = periodic_presentation(p as usize, &u, &v, &output, &format!("fuzz{i}-a"))?;
        let b = periodic_presentation(q as usize, &u2, &v2, &output, &format!("fuzz{i}-b"))?;
        out.push(FuzzCase { p, q, preperiod: u.into(), period: v.into(), a, b });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::words::power;

    fn load(name: &str) -> SubstitutionSystem {
        fixtures::load(name).unwrap().unwrap()
    }

    #[test]
    fn agreement_examples() {
        assert!(prefix_agreement(&load("per2"), &load("per3"), 100_000).unwrap().agrees());
        let a = prefix_agreement(&load("fibonacci"), &load("thue_morse"), 10).unwrap();
        assert!(a.mismatch.unwrap() <= 3);
        assert!(prefix_agreement(&load("chacon"), &load("chacon"), 5000).unwrap().agrees());
    }

    #[test]
    fn periodic_pair_is_consistent() {
        let r = cobham_check(&load("per2"), &load("per3"), &CobhamOptions::default()).unwrap();
        assert_eq!(r.conclusion, Conclusion::ConsistentPeriodic);
        assert_eq!(r.independence, Some(IndependenceVerdict::Independent));
        assert_eq!(
            r.periodicity,
            Some(PeriodicityCertificate::Periodic { preperiod: 0, period: 2, verified_to: 100_000 })
        );
        assert!(r.bounded_gaps.iter().all(|g| g.plateau));
        let back = CobhamReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn fibonacci_and_its_square() {
        let fib = load("fibonacci");
        let sq = SubstitutionSystem::new(power(fib.sigma(), 2).unwrap(), fib.start(), None, "fib2").unwrap();
        let opts = CobhamOptions { depth: 20_000, ..Default::default() };
        let r = cobham_check(&fib, &sq, &opts).unwrap();
        assert_eq!(r.conclusion, Conclusion::ConsistentDependent);
        match r.independence.unwrap() {
            IndependenceVerdict::Dependent { k, l, .. } => assert_eq!((k, l), (2, 1)),
            v => panic!("{v:?}"),
        }
        assert!(r.same_fixed_point_setting);
    }

    #[test]
    fn different_sequences_are_inconclusive() {
        let r = cobham_check(&load("fibonacci"), &load("per3"), &CobhamOptions::default()).unwrap();
        assert!(matches!(r.conclusion, Conclusion::Inconclusive { .. }));
        assert_eq!(r.conclusion.exit_code(), 5);
    }

    #[test]
    fn presentations_generate_the_target() {
        let out = Alphabet::numbered(2).unwrap();
        let sys = periodic_presentation(3, &[1, 1, 0], &[0, 1, 1], &out, "t").unwrap();
        let x = sys.image_prefix(30).unwrap();
        let want: Vec<Letter> = [1, 1, 0].into_iter().chain([0, 1, 1].repeat(9)).collect();
        assert_eq!(&x[..], &want[..]);
    }

    #[test]
    fn fuzz_pairs_agree() {
        for c in fuzz_cases(7, 20).unwrap() {
            assert!(prefix_agreement(&c.a, &c.b, 5000).unwrap().agrees());
        }
        let a: Vec<_> = fuzz_cases(3, 5).unwrap().iter().map(|c| c.a.to_file_string()).collect();
        let b: Vec<_> = fuzz_cases(3, 5).unwrap().iter().map(|c| c.a.to_file_string()).collect();
        assert_eq!(a, b);
    }
}
