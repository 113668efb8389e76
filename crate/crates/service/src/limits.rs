use clap::Args;
use vdgame_core::aut::{AutOptions, DEFAULT_MAX_VERTICES};
use vdgame_core::constructions::ConstructionOptions;
use vdgame_core::game::{GameOptions, DEFAULT_MAX_SEQUENCES};
use vdgame_core::group::DEFAULT_MAX_ORDER;

/// Size guardrails shared by every subcommand and the HTTP service.
#[derive(Debug, Clone, Copy, Args)]
pub struct Limits {
    /// Largest graph the automorphism engine will accept
    #[arg(long, global = true, env = "VDGAME_MAX_VERTICES", default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
    /// Largest group order accepted in a spec
    #[arg(long, global = true, env = "VDGAME_MAX_ORDER", default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: usize,
    /// Largest k^l replayed by verify-exhaustive
    #[arg(long, global = true, env = "VDGAME_MAX_SEQUENCES", default_value_t = DEFAULT_MAX_SEQUENCES)]
    pub max_sequences: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: DEFAULT_MAX_VERTICES,
            max_order: DEFAULT_MAX_ORDER,
            max_sequences: DEFAULT_MAX_SEQUENCES,
        }
    }
}

impl Limits {
    pub fn construction_options(&self, verify: bool) -> ConstructionOptions {
        ConstructionOptions {
            verify,
            max_group_order: self.max_order,
            aut: AutOptions {
                max_vertices: self.max_vertices,
                ..AutOptions::default()
            },
        }
    }

    pub fn game_options(&self, verify: bool) -> GameOptions {
        GameOptions {
            construction: self.construction_options(verify),
            verify_rounds: verify,
            max_sequences: self.max_sequences,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits_reach_every_option() {
        let limits = Limits {
            max_vertices: 123,
            max_order: 12,
            max_sequences: 7,
        };
        let opts = limits.game_options(false);
        assert_eq!(opts.construction.aut.max_vertices, 123);
        assert_eq!(opts.construction.max_group_order, 12);
        assert_eq!(opts.max_sequences, 7);
        assert!(!opts.verify_rounds && !opts.construction.verify);
    }
}
