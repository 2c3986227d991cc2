use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::formats::{correlation_json, sha256_hex};
use crate::bell::{evaluate, spectral_gap, BellFunctional, FunctionalConfig, SpectralGap};
use crate::bounds::EntanglementReport;
use crate::error::{Error, Result};
use crate::fidelity::{fhat, FidelityOptions, SettingBound, SettingScope, ShopmOptions};
use crate::purity::{a1_from_profile, a1_from_spectrum, NondegeneracyProfile, PurityCertificate, PurityMode, BOUND_SLACK};
use crate::quantum::{Correlation, MeasurementConfig, DEFAULT_NO_SIGNALING_WARN};

pub const REPORT_SCHEMA: &str = "entcert.report/1";
pub const GAP_SCHEMA: &str = "entcert.gap/1";

#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    Profile(NondegeneracyProfile),
    Spectral(SpectralGap),
}

impl Evidence {
    pub fn mode(&self) -> PurityMode {
        match self {
            Evidence::Profile(_) => PurityMode::Profile,
            Evidence::Spectral(_) => PurityMode::Spectral,
        }
    }

    fn canonical_json(&self) -> String {
        match self {
            Evidence::Profile(p) => p.to_json(),
            Evidence::Spectral(g) => GapDoc::from(*g).to_json(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapDoc {
    pub schema: String,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl From<SpectralGap> for GapDoc {
    fn from(g: SpectralGap) -> Self {
        GapDoc { schema: GAP_SCHEMA.into(), lambda1: g.lambda1, lambda2: g.lambda2 }
    }
}

impl GapDoc {
    pub fn to_json(&self) -> String {
        super::formats::to_json_string(self)
    }
}

/// Evidence from a profile, gap or measurement document, told apart by
/// its `schema` field. Measurements are turned into the spectral gap of
/// `f`'s Bell operator.
pub fn parse_evidence(bytes: &[u8], f: &BellFunctional) -> Result<Evidence> {
    #[derive(Deserialize)]
    struct Probe {
        schema: String,
    }
    let probe: Probe = serde_json::from_slice(bytes)?;
    match probe.schema.as_str() {
        crate::purity::PROFILE_SCHEMA => {
            let p = NondegeneracyProfile::from_json(std::str::from_utf8(bytes).map_err(|e| Error::Schema(e.to_string()))?)?;
            Ok(Evidence::Profile(p))
        }
        GAP_SCHEMA => {
            let g: GapDoc = serde_json::from_slice(bytes)?;
            Ok(Evidence::Spectral(SpectralGap { lambda1: g.lambda1, lambda2: g.lambda2 }))
        }
        crate::quantum::MEASUREMENT_SCHEMA => {
            let m: MeasurementConfig = serde_json::from_slice(bytes)?;
            Ok(Evidence::Spectral(spectral_gap(f, &m.build()?)?))
        }
        other => Err(Error::Schema(format!("unrecognised evidence schema {other:?}"))),
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub seed: u64,
    pub shopm: ShopmOptions,
    pub scope: SettingScope,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { seed: 0, shopm: ShopmOptions::default(), scope: SettingScope::All }
    }
}

impl CertifyOptions {
    fn fidelity(&self) -> FidelityOptions {
        FidelityOptions { shopm: self.shopm.clone(), scope: self.scope.clone(), seed: self.seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

impl Estimate {
    pub fn point(value: f64) -> Self {
        Estimate { value, sigma: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub correlation_sha256: String,
    /// Digests of the files the inputs were read from, by role.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub source_files: BTreeMap<String, String>,
    pub functional: String,
    pub functional_sha256: String,
    pub mode: PurityMode,
    pub evidence_sha256: String,
    pub fidelity_scope: SettingScope,
    pub shopm_restarts: usize,
    pub shopm_max_iter: usize,
    pub shopm_tol: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resamples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapDiagnostics {
    pub requested: usize,
    pub used: usize,
    pub dropped: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub no_signaling_max_deviation: f64,
    pub no_signaling_warning: bool,
    pub fidelity_converged: bool,
    pub fidelity_settings: Vec<SettingBound>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<BootstrapDiagnostics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub schema: String,
    pub inputs: ReportInputs,
    pub classical_bound: f64,
    pub quantum_bound: f64,
    pub bell_value: Estimate,
    /// Certified purity, 0 when no certificate applies.
    pub a1: Estimate,
    pub purity: Option<PurityCertificate>,
    pub fhat: Estimate,
    pub fhat_argmin: Vec<usize>,
    pub gme_lower: Estimate,
    pub s_upper: Estimate,
    pub s_a_lower: Option<Estimate>,
    pub ic_lower: Option<Estimate>,
    pub ree_lower: Estimate,
    /// Quantities that certify nothing for these data.
    pub vacuous: Vec<String>,
    pub diagnostics: Diagnostics,
}

impl CertificateReport {
    pub fn to_json(&self) -> String {
        super::formats::to_json_string(self)
    }

    pub fn is_vacuous(&self) -> bool {
        self.vacuous.iter().any(|v| v == "all")
    }
}

/// Central values of one pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PointEstimate {
    pub bell: f64,
    pub a1: f64,
    pub purity: Option<PurityCertificate>,
    pub fhat: f64,
    pub fidelity: crate::fidelity::FidelityBound,
    pub bounds: EntanglementReport,
}

pub(crate) fn run_pipeline(c: &Correlation, f: &BellFunctional, evidence: &Evidence, opts: &CertifyOptions) -> Result<PointEstimate> {
    if c.dims().dims() != f.quantum_bound().dims.as_slice() {
        return Err(Error::DimensionMismatch(format!(
            "{} has its quantum bound for dimensions {:?}, data declare {}",
            f.name(),
            f.quantum_bound().dims,
            c.dims()
        )));
    }
    let bell = evaluate(f, c)?;
    let c_q = f.quantum_bound().value;
    if bell > c_q + BOUND_SLACK {
        return Err(Error::InconsistentData { value: bell, bound: c_q, slack: BOUND_SLACK });
    }
    let purity = match evidence {
        Evidence::Spectral(gap) => Some(a1_from_spectrum(bell, *gap)?),
        Evidence::Profile(p) => {
            if p.functional != f.name() || p.dims != f.quantum_bound().dims {
                return Err(Error::MissingEvidence(format!(
                    "profile is for {} {:?}, functional is {} {:?}",
                    p.functional,
                    p.dims,
                    f.name(),
                    f.quantum_bound().dims
                )));
            }
            a1_from_profile(bell, p)?
        }
    };
    let a1 = purity.as_ref().map_or(0.0, |p| p.a1);
    let fidelity = fhat(c, &opts.fidelity())?;
    let bounds = EntanglementReport::new(a1, fidelity.value, c.dims())?;
    Ok(PointEstimate { bell, a1, purity, fhat: fidelity.value, fidelity, bounds })
}

pub(crate) fn vacuous_markers(p: &PointEstimate, c_l: f64) -> Vec<String> {
    let mut v = Vec::new();
    if p.bell <= c_l {
        v.push("bell_value_not_above_classical_bound".to_string());
    }
    if p.a1 <= 0.0 {
        v.push("purity".to_string());
    }
    if p.bounds.gme_lower <= 0.0 {
        v.push("gme_lower".to_string());
    }
    if p.bounds.ic_lower.is_some_and(|x| x <= 0.0) {
        v.push("ic_lower".to_string());
    }
    if p.bounds.ree_lower <= 0.0 {
        v.push("ree_lower".to_string());
    }
    if p.bounds.is_vacuous() {
        v.push("all".to_string());
    }
    v
}

pub(crate) fn build_report(
    c: &Correlation,
    f: &BellFunctional,
    evidence: &Evidence,
    opts: &CertifyOptions,
    p: PointEstimate,
) -> CertificateReport {
    let ns = c.no_signaling_deviation();
    CertificateReport {
        schema: REPORT_SCHEMA.into(),
        inputs: ReportInputs {
            correlation_sha256: sha256_hex(correlation_json(c).as_bytes()),
            source_files: BTreeMap::new(),
            functional: f.name().into(),
            functional_sha256: sha256_hex(FunctionalConfig::from_functional(f).to_json().as_bytes()),
            mode: evidence.mode(),
            evidence_sha256: sha256_hex(evidence.canonical_json().as_bytes()),
            fidelity_scope: opts.scope.clone(),
            shopm_restarts: opts.shopm.restarts,
            shopm_max_iter: opts.shopm.max_iter,
            shopm_tol: opts.shopm.tol,
            seed: opts.seed,
            resamples: None,
        },
        classical_bound: f.classical_bound().value,
        quantum_bound: f.quantum_bound().value,
        bell_value: Estimate::point(p.bell),
        a1: Estimate::point(p.a1),
        fhat: Estimate::point(p.fhat),
        fhat_argmin: p.fidelity.argmin.clone(),
        gme_lower: Estimate::point(p.bounds.gme_lower),
        s_upper: Estimate::point(p.bounds.s_upper),
        s_a_lower: p.bounds.s_a_lower.map(Estimate::point),
        ic_lower: p.bounds.ic_lower.map(Estimate::point),
        ree_lower: Estimate::point(p.bounds.ree_lower),
        vacuous: vacuous_markers(&p, f.classical_bound().value),
        diagnostics: Diagnostics {
            no_signaling_max_deviation: ns,
            no_signaling_warning: ns > DEFAULT_NO_SIGNALING_WARN,
            fidelity_converged: p.fidelity.converged,
            fidelity_settings: p.fidelity.per_setting.clone(),
            bootstrap: None,
        },
        purity: p.purity,
    }
}

/// Bell value, purity certificate, `F̂` and the entanglement bounds for one
/// correlation table.
pub fn certify(c: &Correlation, f: &BellFunctional, evidence: &Evidence, opts: &CertifyOptions) -> Result<CertificateReport> {
    let p = run_pipeline(c, f, evidence, opts)?;
    Ok(build_report(c, f, evidence, opts, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{ghz_xy_settings, mabk3};
    use crate::quantum::{correlation_from_state, make_ghz3, DimensionVector};

    #[test]
    fn ghz_endpoint() {
        let c = correlation_from_state(&make_ghz3().to_density(), &ghz_xy_settings()).unwrap();
        let f = mabk3();
        let ev = Evidence::Spectral(SpectralGap { lambda1: 2.0, lambda2: 0.0 });
        let r = certify(&c, &f, &ev, &CertifyOptions::default()).unwrap();
        assert!((r.bell_value.value - 2.0).abs() < 1e-9);
        assert!((r.a1.value - 1.0).abs() < 1e-9);
        assert!((r.fhat.value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
        assert!((r.gme_lower.value - 0.5).abs() < 1e-6);
        assert!(r.ic_lower.is_none());
        assert!(!r.is_vacuous());
    }

    #[test]
    fn uniform_is_vacuous() {
        let c = Correlation::uniform(DimensionVector::new(vec![2, 2, 2]).unwrap(), vec![2; 3], vec![2; 3]).unwrap();
        let ev = Evidence::Spectral(SpectralGap { lambda1: 2.0, lambda2: 0.0 });
        let r = certify(&c, &mabk3(), &ev, &CertifyOptions::default()).unwrap();
        assert!(r.bell_value.value <= 1.0);
        assert!(r.is_vacuous());
        assert!(r.vacuous.contains(&"purity".to_string()));
    }

    #[test]
    fn inconsistent_data() {
        // a signalling table reaching the algebraic maximum 4 of cglmp3
        let f = crate::bell::cglmp3();
        let mut probs = vec![0.0; 36];
        for s in 0..4 {
            let best = (0..9).max_by(|&a, &b| f.coefficients()[s * 9 + a].total_cmp(&f.coefficients()[s * 9 + b])).unwrap();
            probs[s * 9 + best] = 1.0;
        }
        let c = Correlation::new(DimensionVector::new(vec![3, 3]).unwrap(), vec![2, 2], vec![3, 3], probs).unwrap();
        let ev = Evidence::Spectral(SpectralGap { lambda1: 2.9, lambda2: 1.0 });
        assert!(matches!(certify(&c, &f, &ev, &CertifyOptions::default()), Err(Error::InconsistentData { .. })));
    }
}
