//! Config-driven pipeline: named construction stages chained per the
//! project configuration, accumulating deterministic JSON artifacts.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use crate::bank::FilterBankPair;
use crate::error::{Error, Result};
use crate::io::{
    export_mask, MaskFormat, PipelineKind, ProjectConfig, UtilityDualMode,
};
use crate::lattice::DilationContext;
use crate::scalar::Backend;
use crate::symmetry::{OrbitStructure, SymmetryContext};
use crate::trigpoly::TrigPoly;
use crate::verify::{full_report, ReportOptions, VerificationReport};

/// Mutable state threaded through the stages.
pub struct PipelineState {
    pub config: ProjectConfig,
    pub base_dir: PathBuf,
    pub backend: Backend,
    pub seed: u64,
    pub dil: Option<DilationContext>,
    pub sym: Option<SymmetryContext>,
    pub orbits: Option<OrbitStructure>,
    pub m0: Option<TrigPoly>,
    /// Full dual refinable mask (frame-like path) or utility dual (frame path).
    pub m0t: Option<TrigPoly>,
    pub bank: Option<FilterBankPair>,
    pub report: Option<VerificationReport>,
    /// File name -> JSON text, in deterministic order.
    pub artifacts: BTreeMap<String, String>,
}

impl PipelineState {
    pub fn new(config: ProjectConfig, base_dir: PathBuf, backend: Backend, seed: u64) -> Self {
        PipelineState {
            config,
            base_dir,
            backend,
            seed,
            dil: None,
            sym: None,
            orbits: None,
            m0: None,
            m0t: None,
            bank: None,
            report: None,
            artifacts: BTreeMap::new(),
        }
    }

    fn dil(&self) -> Result<&DilationContext> {
        self.dil.as_ref().ok_or_else(|| missing("digit stage"))
    }

    fn sym(&self) -> Result<&SymmetryContext> {
        self.sym.as_ref().ok_or_else(|| missing("orbit stage"))
    }

    fn orbits(&self) -> Result<&OrbitStructure> {
        self.orbits.as_ref().ok_or_else(|| missing("orbit stage"))
    }

    fn m0(&self) -> Result<&TrigPoly> {
        self.m0.as_ref().ok_or_else(|| missing("mask load"))
    }

    fn push_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value)?;
        self.artifacts.insert(name.to_string(), text);
        Ok(())
    }

    fn push_mask(&mut self, name: &str, poly: &TrigPoly) -> Result<()> {
        let file = export_mask(poly, MaskFormat::Entries)?;
        self.push_json(name, &file)
    }

    fn push_bank(&mut self, prefix: &str) -> Result<()> {
        let bank = self.bank.clone().ok_or_else(|| missing("construction stage"))?;
        for (v, m) in bank.primal.iter().enumerate() {
            self.push_mask(&format!("{prefix}_primal_{v}.json"), m)?;
        }
        for (v, m) in bank.dual.iter().enumerate() {
            self.push_mask(&format!("{prefix}_dual_{v}.json"), m)?;
        }
        #[derive(Serialize)]
        struct BankMeta<'a> {
            provenance: String,
            labels: &'a [crate::bank::WaveletLabel],
            normalization: &'a str,
        }
        self.push_json(
            &format!("{prefix}_meta.json"),
            &BankMeta {
                provenance: format!("{:?}", bank.provenance),
                labels: &bank.labels,
                normalization: &bank.normalization_note,
            },
        )
    }
}

fn missing(what: &str) -> Error {
    Error::InternalInconsistency(format!("pipeline stage ran before the {what}"))
}

/// One named pipeline stage.
pub trait Construction {
    fn name(&self) -> &'static str;
    fn run(&self, st: &mut PipelineState) -> Result<()>;
}

/// Digit-set stage: dilation context plus the digit artifacts.
pub struct DigitsStage;

impl Construction for DigitsStage {
    fn name(&self) -> &'static str {
        "digits"
    }

    fn run(&self, st: &mut PipelineState) -> Result<()> {
        let (dil, sym, orbits) = st.config.contexts()?;
        #[derive(Serialize)]
        struct Digits<'a> {
            dim: usize,
            m: usize,
            digits: &'a [Vec<i64>],
            dual_digits: &'a [Vec<i64>],
        }
        st.push_json(
            "digits.json",
            &Digits {
                dim: dil.dim,
                m: dil.m,
                digits: &dil.digits,
                dual_digits: &dil.dual_digits,
            },
        )?;
        let mut m0 = st.config.mask.load(&st.base_dir)?;
        if st.backend == Backend::Float {
            m0 = m0.to_float();
        }
        st.dil = Some(dil);
        st.sym = Some(sym);
        st.orbits = Some(orbits);
        st.m0 = Some(m0);
        Ok(())
    }
}

/// Orbit stage: writes the orbit decomposition artifact.
pub struct OrbitsStage;

impl Construction for OrbitsStage {
    fn name(&self) -> &'static str {
        "orbits"
    }

    fn run(&self, st: &mut PipelineState) -> Result<()> {
        #[derive(Serialize)]
        struct OrbitOut {
            digits: Vec<Vec<i64>>,
            stabilizer: Vec<Vec<Vec<i64>>>,
            transversal: Vec<Vec<Vec<i64>>>,
            r_vectors: Vec<Vec<i64>>,
        }
        let dil = st.dil()?.clone();
        let sym = st.sym()?.clone();
        let orbits = st.orbits()?.clone();
        let out: Vec<OrbitOut> = orbits
            .orbits
            .iter()
            .map(|o| OrbitOut {
                digits: o.digits.iter().map(|&i| dil.digits[i].clone()).collect(),
                stabilizer: o.stabilizer.iter().map(|&f| sym.group[f].rows()).collect(),
                transversal: o.transversal.iter().map(|&e| sym.group[e].rows()).collect(),
                r_vectors: o.r_vectors.values().cloned().collect(),
            })
            .collect();
        st.push_json("orbits.json", &out)
    }
}

/// Dual-mask stage for the frame-like path: load or solve the full dual.
pub struct DualStage;

impl Construction for DualStage {
    fn name(&self) -> &'static str {
        "dual"
    }

    fn run(&self, st: &mut PipelineState) -> Result<()> {
        let m0t = match &st.config.dual_mask {
            Some(src) => src.load(&st.base_dir)?,
            None => crate::dualmask::dual_mask(
                st.m0()?,
                st.dil()?,
                st.sym()?,
                st.config.n,
                st.config.support_cap,
            )?,
        };
        st.push_mask("dual_mask.json", &m0t)?;
        st.m0t = Some(m0t);
        Ok(())
    }
}

/// Frame-like extension stage, plain or symmetrized per config.
pub struct FramelikeStage;

impl Construction for FramelikeStage {
    fn name(&self) -> &'static str {
        "framelike"
    }

    fn run(&self, st: &mut PipelineState) -> Result<()> {
        let m0t = st.m0t.clone().ok_or_else(|| missing("dual stage"))?;
        let bank = if st.config.symmetrize {
            crate::symmetrize::symmetrized_framelike(
                st.m0()?,
                &m0t,
                st.dil()?,
                st.sym()?,
                st.orbits()?,
                st.config.n,
            )?
        } else {
            let full = crate::framelike::framelike_extension(
                st.m0()?,
                &m0t,
                st.dil()?,
                st.sym()?,
                st.orbits()?,
                st.config.n,
            )?;
            // trivial dual + interpolatory mask: drop the zero dual row
            if m0t == TrigPoly::one(st.dil()?.dim, full.backend) {
                match crate::framelike::reduce_generators(
                    &full,
                    st.dil()?,
                    st.sym()?,
                    st.orbits()?,
                    st.config.n,
                ) {
                    Ok(r) => r,
                    Err(Error::NotInterpolatoryAtDigit) => full,
                    Err(e) => return Err(e),
                }
            } else {
                full
            }
        };
        st.bank = Some(bank);
        st.push_bank("framelike")
    }
}

/// Lifting stage on top of the frame-like bank.
pub struct LiftStage;

impl Construction for LiftStage {
    fn name(&self) -> &'static str {
        "lift"
    }

    fn run(&self, st: &mut PipelineState) -> Result<()> {
        let bank = st.bank.clone().ok_or_else(|| missing("frame-like stage"))?;
        let user: Option<Vec<Option<TrigPoly>>> = match &st.config.lifting {
            None => None,
            Some(rows) => Some(
                rows.iter()
                    .map(|slot| slot.as_ref().map(|src| src.load(&st.base_dir)).transpose())
                    .collect::<Result<_>>()?,
            ),
        };
        let lifted = if st.config.symmetrize {
            crate::symmetrize::symmetrized_lift(
                &bank,
                st.dil()?,
                st.sym()?,
                st.orbits()?,
                user,
            )?
        } else {
            let dil = st.dil()?;
            let sym = st.sym()?;
            let orbits = st.orbits()?;
            let fam = match user {
                None => crate::lifting::auto_family(&bank, dil, sym, orbits)?,
                Some(rows) => {
                    let mut bases = Vec::with_capacity(orbits.num_orbits());
                    for p in 0..orbits.num_orbits() {
                        match rows.get(p).cloned().flatten() {
                            None => bases.push(None),
                            Some(l) => {
                                bases.push(Some(crate::lifting::accept_user_poly(
                                    &l, p, dil, sym, orbits,
                                )?))
                            }
                        }
                    }
                    crate::lifting::family_from_bases(bases, dil, sym, orbits)?
                }
            };
            crate::lifting::lift(&bank, &fam, dil, sym, orbits)?
        };
        st.bank = Some(lifted);
        st.push_bank("lifted")
    }
}

/// Direct frame stage: utility dual per mode, then the frame algorithm.
pub struct FrameStage;

impl Construction for FrameStage {
    fn name(&self) -> &'static str {
        "frame"
    }

    fn run(&self, st: &mut PipelineState) -> Result<()> {
        let n = st.config.n;
        let m0t_prime = match st.config.utility_dual {
            UtilityDualMode::File => st
                .config
                .utility_dual_file
                .as_ref()
                .ok_or_else(|| Error::Config("utility_dual = file needs a file".into()))?
                .load(&st.base_dir)?,
            UtilityDualMode::Auto => crate::frames::utility_dual(
                st.m0()?,
                st.dil()?,
                st.sym()?,
                n,
                n,
                st.config.support_cap,
            )?,
            UtilityDualMode::Reduced => crate::frames::utility_dual(
                st.m0()?,
                st.dil()?,
                st.sym()?,
                n,
                1,
                st.config.support_cap,
            )?,
        };
        st.push_mask("utility_dual.json", &m0t_prime)?;
        let bank = if st.config.symmetrize {
            crate::symmetrize::symmetrized_frames(
                st.m0()?,
                &m0t_prime,
                st.dil()?,
                st.sym()?,
                st.orbits()?,
                n,
            )?
        } else {
            crate::frames::algorithm1(
                st.m0()?,
                &m0t_prime,
                st.dil()?,
                st.sym()?,
                st.orbits()?,
                n,
            )?
        };
        st.m0t = Some(m0t_prime);
        st.bank = Some(bank);
        st.push_bank("frame")?;
        // the solved dual refinable mask is the headline artifact
        let m0t = st.bank.as_ref().expect("just set").dual[0].clone();
        st.push_mask("dual_mask.json", &m0t)
    }
}

/// Verification stage: full report on the final bank.
pub struct VerifyStage;

impl Construction for VerifyStage {
    fn name(&self) -> &'static str {
        "verify"
    }

    fn run(&self, st: &mut PipelineState) -> Result<()> {
        let bank = st.bank.clone().ok_or_else(|| missing("construction stage"))?;
        let n = st.config.n;
        let (want_primal, want_dual) = match st.config.pipeline {
            PipelineKind::Framelike => (0, n),
            PipelineKind::Lift => (1, n),
            PipelineKind::Frame => (1, n),
        };
        let opts = ReportOptions {
            samples: 64,
            seed: st.seed,
            want_primal_vm: want_primal,
            want_dual_vm: want_dual,
            nmax: n.max(4),
        };
        let report = full_report(&bank, st.dil()?, st.sym()?, st.orbits()?, &opts)?;
        st.artifacts.insert("report.json".into(), report.to_json());
        st.report = Some(report);
        Ok(())
    }
}

/// Stage chain for a CLI command name.
pub fn chain_for(command: &str, config: &ProjectConfig) -> Result<Vec<Box<dyn Construction>>> {
    let full: Vec<&str> = match config.pipeline {
        PipelineKind::Framelike => vec!["digits", "orbits", "dual", "framelike"],
        PipelineKind::Lift => vec!["digits", "orbits", "dual", "framelike", "lift"],
        PipelineKind::Frame => vec!["digits", "orbits", "frame"],
    };
    let names: Vec<&str> = match command {
        "digits" => vec!["digits"],
        "orbits" => vec!["digits", "orbits"],
        "dual" => vec!["digits", "orbits", "dual"],
        "framelike" => vec!["digits", "orbits", "dual", "framelike"],
        "lift" => vec!["digits", "orbits", "dual", "framelike", "lift"],
        "frame" => vec!["digits", "orbits", "frame"],
        // symmetrize reruns the configured pipeline with mixing enabled;
        // the config flag is forced by the CLI layer
        "symmetrize" | "run" | "verify" => {
            let mut v = full;
            v.push("verify");
            v
        }
        other => return Err(Error::Config(format!("unknown command {other:?}"))),
    };
    Ok(names
        .into_iter()
        .map(|n| -> Box<dyn Construction> {
            match n {
                "digits" => Box::new(DigitsStage),
                "orbits" => Box::new(OrbitsStage),
                "dual" => Box::new(DualStage),
                "framelike" => Box::new(FramelikeStage),
                "lift" => Box::new(LiftStage),
                "frame" => Box::new(FrameStage),
                "verify" => Box::new(VerifyStage),
                _ => unreachable!("chain names are fixed above"),
            }
        })
        .collect())
}

/// Execute a chain; artifacts accumulate in the state.
pub fn execute(chain: &[Box<dyn Construction>], st: &mut PipelineState) -> Result<()> {
    for stage in chain {
        // annotate string-carrying variants with the stage name; keep the
        // variant itself so the caller can map errors to exit codes
        stage.run(st).map_err(|e| match e {
            Error::PreconditionFailed(m) => {
                Error::PreconditionFailed(format!("stage {}: {m}", stage.name()))
            }
            Error::PostconditionFailed(m) => {
                Error::PostconditionFailed(format!("stage {}: {m}", stage.name()))
            }
            Error::VerificationFailed(m) => {
                Error::VerificationFailed(format!("stage {}: {m}", stage.name()))
            }
            other => other,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{ex2_m0};
    use crate::io::{MaskSource};

    fn ex2_config() -> ProjectConfig {
        ProjectConfig {
            dilation: vec![vec![1, -2], vec![2, -1]],
            digits: Some(vec![vec![0, 0], vec![-1, 0], vec![1, 0]]),
            group_generators: vec![vec![vec![-1, 0], vec![0, -1]]],
            center: vec!["1/2".into(), "0".into()],
            mask: MaskSource::Inline(export_mask(&ex2_m0(), MaskFormat::Entries).unwrap()),
            dual_mask: None,
            n: 2,
            support_cap: None,
            pipeline: PipelineKind::Frame,
            symmetrize: false,
            utility_dual: UtilityDualMode::Reduced,
            utility_dual_file: None,
            lifting: None,
        }
    }

    #[test]
    fn frame_chain_produces_bank_and_report() {
        let cfg = ex2_config();
        let chain = chain_for("run", &cfg).unwrap();
        let mut st = PipelineState::new(cfg, PathBuf::from("."), Backend::Exact, 0);
        execute(&chain, &mut st).unwrap();
        let report = st.report.as_ref().unwrap();
        assert!(report.all_passed());
        assert!(st.artifacts.contains_key("report.json"));
        assert!(st.artifacts.contains_key("utility_dual.json"));
        assert!(st.artifacts.contains_key("frame_dual_0.json"));
    }

    #[test]
    fn artifacts_are_deterministic() {
        let run = || {
            let cfg = ex2_config();
            let chain = chain_for("run", &cfg).unwrap();
            let mut st = PipelineState::new(cfg, PathBuf::from("."), Backend::Exact, 11);
            execute(&chain, &mut st).unwrap();
            st.artifacts
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn symmetrized_frame_chain_passes() {
        let mut cfg = ex2_config();
        cfg.symmetrize = true;
        let chain = chain_for("run", &cfg).unwrap();
        let mut st = PipelineState::new(cfg, PathBuf::from("."), Backend::Exact, 0);
        execute(&chain, &mut st).unwrap();
        assert!(st.report.as_ref().unwrap().all_passed());
    }
}
