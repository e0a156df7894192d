//! Line-delimited JSON transcripts.
//!
//! A file holds one `header` record, one `move` record per move, an optional
//! `forfeit` record and a trailing `certificate` record. Rationals are written as
//! strings (`3/8`), points in `pre:period` binary form (`:01` is 1/3).

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::families::{FamilySpec, Member};
use crate::game::{Certificate, Forfeit, GameVariant, Move, Player, Transcript};
use crate::numerics::{parse_rat, EpPoint, Rat};
use crate::Error;

pub const SCHEMA_VERSION: u64 = 1;

pub mod rat_text {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let text = String::deserialize(d)?;
        parse_rat(&text).map_err(serde::de::Error::custom)
    }
}

pub mod rat_opt {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        q.as_ref().map(Rat::to_string).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rat(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

pub mod rat_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(qs: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        qs.iter().map(Rat::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rat(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl Serialize for EpPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EpPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub schema_version: u64,
    pub family: String,
    pub function: String,
    pub variant: String,
    pub player_i: String,
    pub player_ii: String,
    pub horizon: u32,
    pub seed: u64,
    pub depth_cap: u32,
    #[serde(with = "rat_opt")]
    pub alpha: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub index: usize,
    pub player: Player,
    pub kind: String,
    pub payload: Value,
    pub legality: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Header(Header),
    Move(MoveRecord),
    Forfeit(Forfeit),
    Certificate(Certificate),
}

fn payload(mv: &Move) -> Value {
    match mv {
        Move::InitialSet(m) | Move::Response(m) => json!({ "carrier": m.kind(), "set": m.text() }),
        Move::Points(pts) => Value::from(pts.iter().map(EpPoint::to_string).collect::<Vec<_>>()),
    }
}

fn decode_move(rec: &MoveRecord, family: &FamilySpec) -> Result<Move, Error> {
    let bad = || Error::Parse(format!("malformed payload at move {}", rec.index));
    match rec.kind.as_str() {
        "points" => {
            let arr = rec.payload.as_array().ok_or_else(bad)?;
            let pts = arr
                .iter()
                .map(|v| v.as_str().ok_or_else(bad)?.parse())
                .collect::<Result<Vec<EpPoint>, Error>>()?;
            Ok(Move::Points(pts))
        }
        "initial_set" | "response" => {
            let carrier = rec.payload["carrier"].as_str().ok_or_else(bad)?;
            let text = rec.payload["set"].as_str().ok_or_else(bad)?;
            let m = Member::decode(carrier, text, family)?;
            Ok(if rec.kind == "response" { Move::Response(m) } else { Move::InitialSet(m) })
        }
        other => Err(Error::Parse(format!("unknown move kind `{other}`"))),
    }
}

/// The records of a played transcript, ending with its certificate.
pub fn records(t: &Transcript, cert: &Certificate) -> Vec<Record> {
    let mut out = vec![Record::Header(Header {
        schema_version: SCHEMA_VERSION,
        family: t.sigma.to_string(),
        function: t.f.to_string(),
        variant: t.variant.to_string(),
        player_i: t.player_i.clone(),
        player_ii: t.player_ii.clone(),
        horizon: t.horizon,
        seed: t.seed,
        depth_cap: t.depth_cap,
        alpha: t.alpha.clone(),
    })];
    for (index, mv) in t.moves.iter().enumerate() {
        let legality = match &t.forfeit {
            Some(fo) if fo.index == index => fo.rule.clone(),
            _ => "ok".to_string(),
        };
        out.push(Record::Move(MoveRecord {
            index,
            player: Player::at(index),
            kind: mv.kind().to_string(),
            payload: payload(mv),
            legality,
        }));
    }
    if let Some(fo) = &t.forfeit {
        out.push(Record::Forfeit(fo.clone()));
    }
    out.push(Record::Certificate(cert.clone()));
    out
}

pub fn to_jsonl(t: &Transcript, cert: &Certificate) -> String {
    let mut s = String::new();
    for r in records(t, cert) {
        s.push_str(&serde_json::to_string(&r).expect("records serialize"));
        s.push('\n');
    }
    s
}

/// Parses a transcript file; the stored certificate is returned if present.
pub fn from_jsonl(text: &str) -> Result<(Transcript, Option<Certificate>), Error> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let first = lines.next().ok_or_else(|| Error::Parse("empty transcript".into()))?;
    let raw: Value = serde_json::from_str(first).map_err(|e| Error::Parse(e.to_string()))?;
    match raw.get("schema_version").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(Error::Schema(v)),
        None => return Err(Error::Parse("first record is not a header".into())),
    }
    let Record::Header(h) = serde_json::from_value(raw).map_err(|e| Error::Parse(e.to_string()))? else {
        return Err(Error::Parse("first record is not a header".into()));
    };
    let sigma: FamilySpec = h.family.parse()?;
    let mut t = Transcript {
        f: h.function.parse()?,
        variant: h.variant.parse::<GameVariant>()?,
        sigma: sigma.clone(),
        moves: Vec::new(),
        seed: h.seed,
        horizon: h.horizon,
        depth_cap: h.depth_cap,
        player_i: h.player_i,
        player_ii: h.player_ii,
        alpha: h.alpha,
        forfeit: None,
    };
    let mut cert = None;
    for line in lines {
        let rec: Record = serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
        match rec {
            Record::Header(_) => return Err(Error::Parse("repeated header".into())),
            Record::Move(m) => {
                if m.index != t.moves.len() {
                    return Err(Error::Parse(format!("move index {} out of order", m.index)));
                }
                t.moves.push(decode_move(&m, &sigma)?);
            }
            Record::Forfeit(fo) => t.forfeit = Some(fo),
            Record::Certificate(c) => cert = Some(c),
        }
    }
    Ok((t, cert))
}
