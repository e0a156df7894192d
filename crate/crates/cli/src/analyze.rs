use anyhow::anyhow;

use selgame_core::families::{FamilySpec, Hsop, DEFAULT_DEPTH_CAP};
use selgame_core::functions::TestFunction;
use selgame_core::{Error, Rat};

use crate::Failure;

/// Gap scales probed on `[0,1]` and its depth-2 pieces.
const PROBE_DENOMS: [i64; 4] = [2, 4, 8, 16];

pub enum Verdict {
    Yes,
    /// Every gap below the spread of the witness set is witnessed.
    No(Rat),
    Unknown(String),
}

pub fn probe(f: &TestFunction, sigma: &FamilySpec, depth_cap: u32) -> Verdict {
    let full = sigma.full_member();
    let mut sets = vec![full.clone()];
    sets.extend(sigma.sub_members(&full, 2));
    for d in PROBE_DENOMS {
        let alpha = Rat::new(1.into(), d.into());
        for p in &sets {
            match sigma.hsop_refine(f, p, &alpha, depth_cap) {
                Ok(Hsop::Refined(_)) => {}
                Ok(Hsop::Witness(w)) => {
                    return match sigma.value_diam(f, &w.set) {
                        Ok(spread) => Verdict::No(spread),
                        Err(e) => Verdict::Unknown(e.to_string()),
                    };
                }
                Err(e) => return Verdict::Unknown(e.to_string()),
            }
        }
    }
    Verdict::Yes
}

pub fn run(function: &str, family: &str, depth_cap: Option<u32>) -> Result<u8, Failure> {
    let f: TestFunction = function.parse().map_err(Failure::config)?;
    let sigma: FamilySpec = family.parse().map_err(Failure::config)?;
    match f.cliquish_decide() {
        Ok(true) => println!("cliquish: yes"),
        Ok(false) => println!("cliquish: no"),
        Err(Error::Undecidable(why)) => println!("cliquish: undecidable ({why})"),
        Err(e) => return Err(anyhow!(e).into()),
    }
    match probe(&f, &sigma, depth_cap.unwrap_or(DEFAULT_DEPTH_CAP)) {
        Verdict::Yes => {
            println!("HSOP: yes; predicted winner: II");
            Ok(0)
        }
        Verdict::No(spread) => {
            println!("HSOP: no (witness α<{spread}); predicted winner: I");
            Ok(0)
        }
        Verdict::Unknown(why) => {
            println!("HSOP: undecided ({why}); predicted winner: unknown");
            Ok(2)
        }
    }
}
