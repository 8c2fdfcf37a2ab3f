use serde::Serialize;

use cobham_core::growth::{self, GrowthType};
use cobham_core::normalize::{self, Sidecar};
use cobham_core::periodicity::{self, PeriodicityCertificate};
use cobham_core::spectral::{self, PerronValue};
use cobham_core::structure::{self, Goodness, SubSubstitution};
use cobham_core::{Result, SubstitutionSystem};

use crate::VERSION;

#[derive(Debug, Serialize)]
pub struct SpectralSection {
    pub incidence: Vec<Vec<String>>,
    pub charpoly: Vec<String>,
    pub charpoly_text: String,
    pub dominant_eigenvalue: PerronValue,
    pub primitive: bool,
}

#[derive(Debug, Serialize)]
pub struct LetterRow {
    pub letter: String,
    pub mortal: bool,
    pub growing: bool,
    pub d: Option<u32>,
    pub theta: Option<PerronValue>,
}

#[derive(Debug, Serialize)]
pub struct GrowthSection {
    pub theta: PerronValue,
    pub d: u32,
    pub a_max: Vec<String>,
    pub growing: bool,
    pub letters: Vec<LetterRow>,
    pub checks: Vec<growth::Diagnostic>,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub version: &'static str,
    pub label: String,
    pub system: String,
    pub alphabet: Vec<String>,
    pub output_alphabet: Vec<String>,
    pub normal: bool,
    pub spectral: SpectralSection,
    pub growth: GrowthSection,
    pub subalphabets: Vec<SubSubstitution>,
    pub good: bool,
    pub goodness: Goodness,
    pub normalization: Option<Sidecar>,
    pub periodicity: Option<PeriodicityCertificate>,
    pub notes: Vec<String>,
}

/// Per-letter growth; mortal letters are removed before the SCC analysis.
pub fn letter_growth(sys: &SubstitutionSystem, bits: u32) -> Result<GrowthSection> {
    let sigma = sys.sigma();
    let mortal = growth::mortal_letters(sigma);
    let (live, keep) = growth::strip_mortal(sigma)?;
    let summary = growth::substitution_growth(&live)?;
    let growing = growth::growing_letters(sigma);
    let mut types: Vec<Option<&GrowthType>> = vec![None; sigma.domain().len()];
    for (i, &a) in keep.iter().enumerate() {
        types[a as usize] = Some(&summary.per_letter[i]);
    }
    let letters = sigma
        .domain()
        .letters()
        .map(|a| LetterRow {
            letter: sigma.domain().token(a).to_string(),
            mortal: mortal[a as usize],
            growing: growing[a as usize],
            d: types[a as usize].map(|t| t.d),
            theta: types[a as usize].map(|t| t.theta.refined(bits)),
        })
        .collect();
    Ok(GrowthSection {
        theta: summary.theta.refined(bits),
        d: summary.d,
        a_max: summary.a_max.iter().map(|&i| live.domain().token(i).to_string()).collect(),
        growing: summary.growing && !mortal.iter().any(|&m| m),
        letters,
        checks: summary.checks,
    })
}

pub fn analyze(sys: &SubstitutionSystem, prefix: Option<usize>, bits: u32) -> Result<AnalysisReport> {
    let sigma = sys.sigma();
    let m = spectral::incidence_matrix(sigma);
    let cp = m.charpoly();
    let spectral = SpectralSection {
        incidence: m.to_string_rows(),
        charpoly: cp.to_strings(),
        charpoly_text: cp.to_string(),
        dominant_eigenvalue: spectral::dominant_eigenvalue_with_bits(&m, bits)?,
        primitive: spectral::is_primitive(&m),
    };
    let mut notes = Vec::new();
    let normalization = match normalize::normalize(sys) {
        Ok(ns) => Some(ns.sidecar()?),
        Err(e) => {
            notes.push(format!("normalization: {e}"));
            None
        }
    };
    let goodness = structure::is_good(sigma)?;
    let periodicity = match prefix {
        Some(n) => {
            let x = sys.image_prefix(n).or_else(|e| match e {
                cobham_core::Error::Erasing => normalize::normalize(sys)?.system.image_prefix(n),
                e => Err(e),
            })?;
            Some(periodicity::detect_ultimate_periodicity(&x, None, None)?)
        }
        None => None,
    };
    Ok(AnalysisReport {
        version: VERSION,
        label: sys.label().to_string(),
        system: sys.to_file_string(),
        alphabet: sys.alphabet().tokens().to_vec(),
        output_alphabet: sys.output_alphabet().tokens().to_vec(),
        normal: sys.is_normal(),
        spectral,
        growth: letter_growth(sys, bits)?,
        subalphabets: structure::sub_substitutions(sigma)?,
        good: goodness.is_good(),
        goodness,
        normalization,
        periodicity,
        notes,
    })
}
