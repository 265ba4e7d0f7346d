//! Shared dictionary-source flags: every subcommand that operates on a
//! dictionary accepts exactly one of --heisenberg, --random, --load.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use sriplab_core::{load_dictionary, Dictionary, Prime};

#[derive(Args, Debug)]
pub struct DictArgs {
    /// Heisenberg dictionary (delta basis plus all chirp bases) over F_p.
    #[arg(long, value_name = "P")]
    pub heisenberg: Option<u64>,

    /// Union of M random orthonormal bases over F_p, drawn from --seed.
    #[arg(long, num_args = 2, value_names = ["P", "M"])]
    pub random: Option<Vec<u64>>,

    /// RNG seed for --random.
    #[arg(long, default_value_t = 0, value_name = "SEED")]
    pub seed: u64,

    /// Load a dictionary previously saved by `dict`.
    #[arg(long, value_name = "PATH")]
    pub load: Option<PathBuf>,
}

impl DictArgs {
    pub fn build(&self) -> Result<Dictionary> {
        match (self.heisenberg, &self.random, &self.load) {
            (Some(p), None, None) => {
                let p = Prime::new(p).map_err(|e| anyhow!("p must be an odd prime: {e}"))?;
                Ok(Dictionary::build_heisenberg(p))
            }
            (None, Some(pm), None) => {
                let p = Prime::new(pm[0]).map_err(|e| anyhow!("p must be an odd prime: {e}"))?;
                let m = usize::try_from(pm[1]).context("basis count m")?;
                Dictionary::build_random_onb_union(p, m, self.seed)
                    .context("building random basis union")
            }
            (None, None, Some(path)) => {
                load_dictionary(path).with_context(|| format!("loading {}", path.display()))
            }
            _ => bail!(
                "invalid configuration (dictionary): exactly one of --heisenberg, --random, \
                 --load is required"
            ),
        }
    }

    /// Canonical flag text for provenance lines.
    pub fn describe(&self) -> String {
        match (self.heisenberg, &self.random, &self.load) {
            (Some(p), None, None) => format!("--heisenberg {p}"),
            (None, Some(pm), None) => format!("--random {} {} --seed {}", pm[0], pm[1], self.seed),
            (None, None, Some(path)) => format!("--load {}", path.display()),
            _ => "<invalid dictionary spec>".to_string(),
        }
    }
}
