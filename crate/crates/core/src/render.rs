//! SVG emitters for patches, deformed patches and window clouds.
//!
//! Figures use the vertical-real-axis convention: the display x axis is the
//! imaginary part and the display y axis the real part, so rendered output
//! matches the construction's orientation.  All numbers are written with
//! fixed precision: identical input gives byte-identical SVG.

use crate::apdata::{comb_hexagon, EdgeType, Tile};
use crate::cps::WindowCloud;
use crate::inflation::Patch;
use crate::reproject::DeformedPatch;
use num_complex::Complex64;

/// Fill colors of the five tile clusters.
pub const CLUSTER_COLORS: [&str; 5] = [
    "#8c5a2b", // Gamma + Delta + Sigma: browns
    "#3b6fb6", // Theta + Lambda: blue
    "#3f9946", // Xi + Pi: green
    "#d0433e", // Phi: red
    "#e3c73c", // Psi: yellow
];

/// Shades within a cluster distinguish the member tiles.
fn tile_fill(tile: Tile) -> &'static str {
    match tile {
        Tile::Gamma => "#8c5a2b",
        Tile::Delta => "#a97b4a",
        Tile::Sigma => "#6e4420",
        Tile::Theta => "#3b6fb6",
        Tile::Lambda => "#6d94cf",
        Tile::Xi => "#3f9946",
        Tile::Pi => "#74b878",
        Tile::Phi => "#d0433e",
        Tile::Psi => "#e3c73c",
    }
}

/// Edge colors by type (used by the edge coloring mode).
pub fn edge_color(e: EdgeType) -> &'static str {
    match e {
        EdgeType::Alpha => "#2450a4",   // blue
        EdgeType::Beta => "#cc2f2f",    // red
        EdgeType::Gamma => "#8a3fbf",   // purple
        EdgeType::Epsilon => "#27b5c4", // cyan
        EdgeType::Eta => "#2f9e44",     // green
        EdgeType::Delta => "#e08a26",
        EdgeType::Zeta => "#76777b",
        EdgeType::Theta => "#7a5230",
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ColorBy {
    Type,
    Parity,
    Edge,
}

impl ColorBy {
    pub fn parse(s: &str) -> Option<ColorBy> {
        match s {
            "type" => Some(ColorBy::Type),
            "parity" => Some(ColorBy::Parity),
            "edge" => Some(ColorBy::Edge),
            _ => None,
        }
    }
}

/// Display transform: vertical real axis, SVG y grows downward.
fn display(z: Complex64) -> (f64, f64) {
    (z.im, -z.re)
}

struct SvgBuilder {
    body: String,
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl SvgBuilder {
    fn new() -> Self {
        SvgBuilder {
            body: String::new(),
            min_x: f64::MAX,
            min_y: f64::MAX,
            max_x: f64::MIN,
            max_y: f64::MIN,
        }
    }

    fn see(&mut self, (x, y): (f64, f64)) {
        self.min_x = self.min_x.min(x);
        self.min_y = self.min_y.min(y);
        self.max_x = self.max_x.max(x);
        self.max_y = self.max_y.max(y);
    }

    fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, stroke: &str, width: f64, opacity: f64) {
        let coords: Vec<String> = pts.iter().map(|p| format!("{:.4},{:.4}", p.0, p.1)).collect();
        for &p in pts {
            self.see(p);
        }
        self.body.push_str(&format!(
            "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"{:.3}\" stroke=\"{}\" stroke-width=\"{:.4}\"/>\n",
            coords.join(" "),
            fill,
            opacity,
            stroke,
            width
        ));
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), stroke: &str, width: f64) {
        self.see(a);
        self.see(b);
        self.body.push_str(&format!(
            "<line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"{}\" stroke-width=\"{:.4}\" stroke-linecap=\"round\"/>\n",
            a.0, a.1, b.0, b.1, stroke, width
        ));
    }

    fn circle(&mut self, c: (f64, f64), r: f64, fill: &str) {
        self.see(c);
        self.body.push_str(&format!(
            "<circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"{:.4}\" fill=\"{}\"/>\n",
            c.0, c.1, r, fill
        ));
    }

    fn finish(self) -> String {
        let (minx, miny, maxx, maxy) = if self.min_x > self.max_x {
            (0.0, 0.0, 1.0, 1.0)
        } else {
            (self.min_x, self.min_y, self.max_x, self.max_y)
        };
        let pad = 0.02 * ((maxx - minx).max(maxy - miny)).max(1.0);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.4} {:.4} {:.4} {:.4}\">\n{}</svg>\n",
            minx - pad,
            miny - pad,
            (maxx - minx) + 2.0 * pad,
            (maxy - miny) + 2.0 * pad,
            self.body
        )
    }
}

/// Renders a patch.  `Type` fills tiles by cluster shade, `Parity` shades the
/// minority orientation parity, `Edge` draws tile edges colored by type.
pub fn render_patch(patch: &Patch, color_by: ColorBy) -> String {
    let mut svg = SvgBuilder::new();
    let stroke_w = 0.35;
    for p in &patch.placements {
        let poly = patch.polygon(p);
        let pts: Vec<(f64, f64)> = poly.iter().map(|v| display(v.embed())).collect();
        match color_by {
            ColorBy::Type => {
                svg.polygon(&pts, tile_fill(p.tile), "#222222", stroke_w, 1.0);
            }
            ColorBy::Parity => {
                let fill = if p.rot % 2 == 0 { "#9aa7b8" } else { "#e8e3d8" };
                svg.polygon(&pts, fill, "#222222", stroke_w, 1.0);
            }
            ColorBy::Edge => {
                svg.polygon(&pts, "#f4f1e8", "#00000000", 0.0, 1.0);
            }
        }
    }
    if color_by == ColorBy::Edge {
        for p in &patch.placements {
            let poly = patch.polygon(p);
            let hex = comb_hexagon(p.tile);
            for k in 0..6 {
                let a = display(poly[k].embed());
                let b = display(poly[(k + 1) % 6].embed());
                svg.line(a, b, edge_color(hex.slots[k].edge), stroke_w * 1.4);
            }
        }
    }
    svg.finish()
}

/// Renders a reprojected patch with cluster colors plus its control points.
pub fn render_deformed(deformed: &DeformedPatch) -> String {
    let mut svg = SvgBuilder::new();
    let unit = deformed.unit();
    for (tile, _, verts) in &deformed.tiles {
        let pts: Vec<(f64, f64)> = verts.iter().map(|v| display(v.embed(unit))).collect();
        svg.polygon(&pts, tile_fill(*tile), "#222222", 0.35, 1.0);
    }
    for (class, _, img) in &deformed.control_points {
        svg.circle(display(img.embed(unit)), 0.9, CLUSTER_COLORS[*class as usize]);
    }
    svg.finish()
}

/// Renders a window cloud: one dot per point, cluster color with the
/// orientation darkening the shade.
pub fn render_cloud(cloud: &WindowCloud) -> String {
    let mut svg = SvgBuilder::new();
    let r = 0.004 * crate::cps::hull_diameter(&cloud.points).max(1e-6);
    for p in &cloud.points {
        let base = CLUSTER_COLORS[p.class as usize];
        let color = shade(base, p.orientation);
        svg.circle((p.x, -p.y), r, &color);
    }
    svg.finish()
}

fn shade(hex: &str, orientation: u8) -> String {
    // Darken by up to 40% across the six orientations.
    let f = 1.0 - 0.08 * orientation as f64;
    let parse = |s: &str| u8::from_str_radix(s, 16).unwrap_or(0) as f64;
    let (r, g, b) = (parse(&hex[1..3]), parse(&hex[3..5]), parse(&hex[5..7]));
    format!(
        "#{:02x}{:02x}{:02x}",
        (r * f) as u8,
        (g * f) as u8,
        (b * f) as u8
    )
}
