//! Named initial states.

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::quasifree::{BogoliubovMap, QuasiFree};
use crate::ti_torus::{ffg_symbol, lambda_state, smooth_shell_profile};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialParams {
    /// λ(k) per momentum index for the paired state.
    #[serde(default)]
    pub profile: Option<Vec<f64>>,
    /// Half-width of the smooth shell profile used when no profile is given.
    #[serde(default)]
    pub shell_width: Option<f64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

pub trait InitialState: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, lattice: &Lattice, params: &InitialParams) -> Result<QuasiFree>;
}

pub struct Ffg;

impl InitialState for Ffg {
    fn name(&self) -> &'static str {
        "ffg"
    }

    fn build(&self, lattice: &Lattice, _: &InitialParams) -> Result<QuasiFree> {
        Ok(ffg_symbol(lattice)?.assemble())
    }
}

pub struct LambdaState;

impl InitialState for LambdaState {
    fn name(&self) -> &'static str {
        "lambda-state"
    }

    fn build(&self, lattice: &Lattice, params: &InitialParams) -> Result<QuasiFree> {
        let profile = match &params.profile {
            Some(p) => p.clone(),
            None => {
                let ns = lattice.n_sigma();
                if ns.len() != 2 || ns[0] != ns[1] {
                    return Err(Error::Config("the shell profile needs equal particle counts in both spins".into()));
                }
                smooth_shell_profile(lattice, ns[0], params.shell_width.unwrap_or(1.0))?
            }
        };
        Ok(lambda_state(lattice, &profile)?.1)
    }
}

pub struct RandomPure;

impl InitialState for RandomPure {
    fn name(&self) -> &'static str {
        "random-pure"
    }

    fn build(&self, lattice: &Lattice, params: &InitialParams) -> Result<QuasiFree> {
        Ok(BogoliubovMap::random(lattice.n_modes(), params.seed.unwrap_or(0)).state())
    }
}

pub struct InitialRegistry {
    entries: BTreeMap<&'static str, Box<dyn InitialState>>,
}

impl InitialRegistry {
    pub fn empty() -> Self {
        InitialRegistry { entries: BTreeMap::new() }
    }

    pub fn register(&mut self, kind: Box<dyn InitialState>) {
        self.entries.insert(kind.name(), kind);
    }

    pub fn get(&self, name: &str) -> Result<&dyn InitialState> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| {
            Error::Config(format!("unknown initial state '{name}' (available: {})", self.names().join(", ")))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn build(&self, name: &str, params: &InitialParams, lattice: &Lattice) -> Result<QuasiFree> {
        self.get(name)?.build(lattice, params)
    }
}

impl Default for InitialRegistry {
    fn default() -> Self {
        let mut r = InitialRegistry::empty();
        r.register(Box::new(Ffg));
        r.register(Box::new(LambdaState));
        r.register(Box::new(RandomPure));
        r
    }
}
