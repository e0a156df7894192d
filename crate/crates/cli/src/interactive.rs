use std::io::{self, BufRead, Write};
use std::path::Path;

use anyhow::Context as _;

use selgame_core::families::Member;
use selgame_core::game::{certify, value_gaps, Certificate, Forfeit, Move, Player, Transcript};
use selgame_core::numerics::EpPoint;
use selgame_core::strategies::Context;
use selgame_core::transcript::to_jsonl;

use crate::{load_scenario, summary, write_out, Failure, Overrides};

enum Input {
    Line(String),
    Quit,
}

fn ask(input: &mut impl BufRead, out: &mut impl Write, prompt: &str) -> io::Result<Input> {
    write!(out, "{prompt}")?;
    out.flush()?;
    let mut line = String::new();
    if input.read_line(&mut line)? == 0 {
        writeln!(out)?;
        return Ok(Input::Quit);
    }
    let line = line.trim();
    Ok(if line == "quit" || line == "q" { Input::Quit } else { Input::Line(line.to_string()) })
}

fn undecided(t: &Transcript) -> Certificate {
    let gaps = value_gaps(&t.f, &t.points());
    let tail = &gaps[gaps.len() - gaps.len().div_ceil(4)..];
    Certificate::Undecided {
        rounds: t.responses().len().saturating_sub(1) as u64,
        tail_max_gap: tail.iter().max().cloned(),
        tail_min_gap: tail.iter().min().cloned(),
    }
}

fn parse_points(line: &str) -> Result<Vec<EpPoint>, selgame_core::Error> {
    line.split(|c: char| c == ',' || c.is_whitespace()).filter(|w| !w.is_empty()).map(str::parse).collect()
}

/// One terminal game with the human as Player I.
pub fn session(
    arg: &str,
    overrides: &Overrides,
    input: &mut impl BufRead,
    out: &mut impl Write,
) -> Result<(Transcript, Certificate), Failure> {
    let mut s = load_scenario(arg)?;
    overrides.apply(&mut s);
    let p = s.prepare().map_err(Failure::config)?;
    let ctx = Context { sigma: p.sigma.clone(), f: p.f.clone(), variant: p.variant.clone(), depth_cap: p.depth_cap };
    let mut t = Transcript {
        sigma: p.sigma.clone(),
        f: p.f.clone(),
        variant: p.variant.clone(),
        moves: Vec::new(),
        seed: s.seed,
        horizon: s.horizon,
        depth_cap: p.depth_cap,
        player_i: "human".into(),
        player_ii: p.player_ii.name(),
        alpha: None,
        forfeit: None,
    };
    let io_err = |e: io::Error| Failure::from(anyhow::Error::from(e).context("terminal"));
    let full = p.sigma.full_member();
    writeln!(out, "family {}, function {}, variant {}, Player II plays {}", t.sigma, t.f, t.variant, t.player_ii).map_err(io_err)?;
    writeln!(out, "points are pre:period bit strings (1:0 is 1/2) or fractions; `quit` stops").map_err(io_err)?;
    let total = 2 * s.horizon as usize + 2;
    while t.moves.len() < total {
        let index = t.moves.len();
        let mv = if Player::at(index) == Player::I {
            let prompt = if index == 0 { "P (empty for the whole space)> ".to_string() } else { format!("x_{}> ", index / 2) };
            let line = match ask(input, out, &prompt).map_err(io_err)? {
                Input::Quit => return Ok((t.clone(), undecided(&t))),
                Input::Line(l) => l,
            };
            let parsed = if index == 0 {
                if line.is_empty() || line == "full" {
                    Ok(Move::InitialSet(full.clone()))
                } else {
                    Member::decode(full.kind(), &line, &t.sigma).map(Move::InitialSet)
                }
            } else {
                parse_points(&line).map(Move::Points)
            };
            let mv = match parsed {
                Ok(mv) => mv,
                Err(e) => {
                    writeln!(out, "could not read that: {e}").map_err(io_err)?;
                    continue;
                }
            };
            if let Err(v) = t.check_legal(&mv) {
                writeln!(out, "illegal move, rule {}; try again", v.rule).map_err(io_err)?;
                continue;
            }
            mv
        } else {
            let mv = p.player_ii.next_move(&ctx, &t.moves, t.seed);
            let verdict = match &mv {
                Ok(mv) => t.check_legal(mv).map_err(|v| v.rule.to_string()),
                Err(e) => Err(format!("strategy error: {e}")),
            };
            if let Err(rule) = verdict {
                if let Ok(mv) = mv {
                    t.moves.push(mv);
                }
                t.forfeit = Some(Forfeit { player: Player::II, index, rule: rule.clone() });
                return Ok((t, Certificate::Forfeit { player: Player::II, index, rule }));
            }
            let mv = mv.expect("checked above");
            let k = index / 2;
            let set = mv.set().expect("response");
            writeln!(out, "P_{k} = {set}").map_err(io_err)?;
            let hint: Vec<String> = t.sigma.sample_points(set, set.resolution() + 2).iter().take(3).map(|x| x.to_string()).collect();
            writeln!(out, "  for example {}", hint.join(" ")).map_err(io_err)?;
            mv
        };
        t.moves.push(mv);
        if index >= 3 && index % 2 == 1 {
            if let Certificate::Convergence { facts } = certify(&t) {
                let f = facts.last().expect("facts");
                writeln!(out, "  round {}: P_{} within {} of {}, value spread {} <= {}", f.round, f.round, f.radius, f.anchor, f.value_diam, f.bound)
                    .map_err(io_err)?;
            }
        }
    }
    let cert = certify(&t);
    Ok((t, cert))
}

pub fn run(arg: &str, overrides: &Overrides, path: Option<&Path>) -> Result<u8, Failure> {
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = io::stdout();
    let (t, cert) = session(arg, overrides, &mut input, &mut out)?;
    writeln!(out, "certificate: {}", summary(&cert)).context("terminal")?;
    if let Some(p) = path {
        write_out(Some(p), &to_jsonl(&t, &cert))?;
    }
    Ok(match cert {
        Certificate::Undecided { .. } => crate::EXIT_UNDECIDED,
        Certificate::Forfeit { .. } => crate::EXIT_MISMATCH,
        _ => 0,
    })
}
