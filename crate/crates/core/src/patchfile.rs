//! Plain-text file formats for patches and window clouds.
//!
//! Both formats are versioned, diff-able, and byte-stable: records are
//! emitted in a canonical order with fixed number formatting, so identical
//! inputs produce identical files.

use crate::apdata::Tile;
use crate::cps::{WindowCloud, WindowPoint};
use crate::inflation::{Patch, Placement};
use crate::ring::Quad;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error("missing header field {0}")]
    MissingHeader(&'static str),
}

/// Serializes a patch: header (version, parity, denominator, count), then
/// one record per placement sorted by (tile, rot, position).
pub fn write_patch(patch: &Patch) -> String {
    let mut placements = patch.placements.clone();
    placements.sort_by_key(|p| (p.tile.index(), p.rot, p.pos));
    let mut s = String::new();
    s.push_str("caspr patch v1\n");
    s.push_str(&format!("parity {}\n", patch.parity));
    s.push_str(&format!("den {}\n", patch.den));
    s.push_str(&format!("count {}\n", placements.len()));
    for p in &placements {
        s.push_str(&format!(
            "{} {} R {} {} {} {}\n",
            p.tile.name(),
            p.rot,
            p.pos.c[0],
            p.pos.c[1],
            p.pos.c[2],
            p.pos.c[3]
        ));
    }
    s
}

pub fn read_patch(text: &str) -> Result<Patch, FileError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(FileError::MissingHeader("signature"))?;
    if header.trim() != "caspr patch v1" {
        return Err(FileError::Parse(1, "bad signature".into()));
    }
    let mut parity: Option<u8> = None;
    let mut den: Option<i64> = None;
    let mut count: Option<usize> = None;
    let mut placements = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let err = |m: &str| FileError::Parse(i + 1, m.into());
        match parts[0] {
            "parity" => parity = Some(parts[1].parse().map_err(|_| err("bad parity"))?),
            "den" => den = Some(parts[1].parse().map_err(|_| err("bad den"))?),
            "count" => count = Some(parts[1].parse().map_err(|_| err("bad count"))?),
            name => {
                let tile = Tile::parse(name).ok_or_else(|| err("unknown tile"))?;
                if parts.len() != 7 {
                    return Err(err("placement record needs 7 fields"));
                }
                let rot: u8 = parts[1].parse().map_err(|_| err("bad rot"))?;
                if parts[2] != "R" && parts[2] != "L" {
                    return Err(err("bad handedness"));
                }
                let mut c = [0i64; 4];
                for (j, slot) in c.iter_mut().enumerate() {
                    *slot = parts[3 + j].parse().map_err(|_| err("bad coordinate"))?;
                }
                placements.push(Placement {
                    tile,
                    rot,
                    pos: Quad { c },
                });
            }
        }
    }
    let patch = Patch {
        placements,
        den: den.ok_or(FileError::MissingHeader("den"))?,
        parity: parity.ok_or(FileError::MissingHeader("parity"))?,
    };
    if let Some(n) = count {
        if n != patch.placements.len() {
            return Err(FileError::Parse(0, "count does not match records".into()));
        }
    }
    Ok(patch)
}

/// Serializes a window cloud: header (method, seed, count), then rows
/// "x,y,class,orientation" in fixed decimal format, in emission order.
pub fn write_cloud(cloud: &WindowCloud) -> String {
    let mut s = String::new();
    s.push_str("caspr cloud v1\n");
    s.push_str(&format!("method {}\n", cloud.method));
    s.push_str(&format!("seed {}\n", cloud.seed));
    s.push_str(&format!("count {}\n", cloud.points.len()));
    for p in &cloud.points {
        s.push_str(&format!(
            "{:.9},{:.9},{},{}\n",
            p.x, p.y, p.class, p.orientation
        ));
    }
    s
}

pub fn read_cloud(text: &str) -> Result<WindowCloud, FileError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(FileError::MissingHeader("signature"))?;
    if header.trim() != "caspr cloud v1" {
        return Err(FileError::Parse(1, "bad signature".into()));
    }
    let mut method = String::new();
    let mut seed = 0u64;
    let mut points = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: &str| FileError::Parse(i + 1, m.into());
        if let Some(rest) = line.strip_prefix("method ") {
            method = rest.to_string();
        } else if let Some(rest) = line.strip_prefix("seed ") {
            seed = rest.parse().map_err(|_| err("bad seed"))?;
        } else if line.starts_with("count ") {
            // informational
        } else {
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 4 {
                return Err(err("point row needs 4 fields"));
            }
            points.push(WindowPoint {
                x: parts[0].parse().map_err(|_| err("bad x"))?,
                y: parts[1].parse().map_err(|_| err("bad y"))?,
                class: parts[2].parse().map_err(|_| err("bad class"))?,
                orientation: parts[3].parse().map_err(|_| err("bad orientation"))?,
            });
        }
    }
    Ok(WindowCloud {
        method,
        seed,
        points,
    })
}
