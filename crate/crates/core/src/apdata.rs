//! The fixed combinatorial data of the meta-tile system: boundary maps,
//! substitution matrices, and the labelled hexagon of each of the nine tiles.
//!
//! Edge order: alpha, beta, gamma, delta, epsilon, zeta, theta, eta.
//! Face order: Gamma, Delta, Theta, Lambda, Xi, Pi, Sigma, Phi, Psi.
//! Vertex order: p, q, s.
//!
//! Everything downstream hangs off these constants, so they are guarded by
//! checksum tests: the composite boundary vanishes (exactly on the integer
//! expansion), each face's boundary chain reproduces its column of d2, and
//! the vertex classes walk consistently around every hexagon.  The s-row
//! entry of the delta column of d1 is r^2 - r^5; this is the unique monomial
//! pair making d1 d2 = 0 hold, and the corner walks of the two faces that
//! use delta close with it.

use crate::groupring::{CellClass, GroupRingMatrix, Poly6};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Tile {
    Gamma,
    Delta,
    Theta,
    Lambda,
    Xi,
    Pi,
    Sigma,
    Phi,
    Psi,
}

impl Tile {
    pub const ALL: [Tile; 9] = [
        Tile::Gamma,
        Tile::Delta,
        Tile::Theta,
        Tile::Lambda,
        Tile::Xi,
        Tile::Pi,
        Tile::Sigma,
        Tile::Phi,
        Tile::Psi,
    ];

    pub fn index(self) -> usize {
        Tile::ALL.iter().position(|&t| t == self).unwrap()
    }

    pub fn from_index(i: usize) -> Tile {
        Tile::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Tile::Gamma => "Gamma",
            Tile::Delta => "Delta",
            Tile::Theta => "Theta",
            Tile::Lambda => "Lambda",
            Tile::Xi => "Xi",
            Tile::Pi => "Pi",
            Tile::Sigma => "Sigma",
            Tile::Phi => "Phi",
            Tile::Psi => "Psi",
        }
    }

    pub fn parse(s: &str) -> Option<Tile> {
        Tile::ALL
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(s))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum EdgeType {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Epsilon,
    Zeta,
    Theta,
    Eta,
}

impl EdgeType {
    pub const ALL: [EdgeType; 8] = [
        EdgeType::Alpha,
        EdgeType::Beta,
        EdgeType::Gamma,
        EdgeType::Delta,
        EdgeType::Epsilon,
        EdgeType::Zeta,
        EdgeType::Theta,
        EdgeType::Eta,
    ];

    pub fn index(self) -> usize {
        EdgeType::ALL.iter().position(|&t| t == self).unwrap()
    }

    pub fn from_index(i: usize) -> EdgeType {
        EdgeType::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeType::Alpha => "alpha",
            EdgeType::Beta => "beta",
            EdgeType::Gamma => "gamma",
            EdgeType::Delta => "delta",
            EdgeType::Epsilon => "epsilon",
            EdgeType::Zeta => "zeta",
            EdgeType::Theta => "theta",
            EdgeType::Eta => "eta",
        }
    }

    /// eta is non-directional: only three rotation classes, r^3 eta = -eta.
    pub fn is_eta(self) -> bool {
        self == EdgeType::Eta
    }

    pub fn orientation_count(self) -> u8 {
        if self.is_eta() {
            3
        } else {
            6
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum VertexType {
    P,
    Q,
    S,
}

impl VertexType {
    /// Order of the rotation class: p and q have 3-fold symmetry (classes
    /// mod r^2), s has none (classes mod r^6).
    pub fn class_modulus(self) -> u8 {
        match self {
            VertexType::P | VertexType::Q => 2,
            VertexType::S => 6,
        }
    }
}

/// A directed edge occurrence: edge type rotated by r^rot, traversed with
/// the given sign relative to the edge's own direction.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct SlotEdge {
    pub edge: EdgeType,
    pub rot: u8,
    pub sign: i8,
}

impl SlotEdge {
    pub const fn new(edge: EdgeType, rot: u8, sign: i8) -> Self {
        SlotEdge { edge, rot, sign }
    }

    /// Rotates the occurrence by r^m, folding eta's relation r^3 eta = -eta.
    pub fn rotated(self, m: u8) -> SlotEdge {
        let mut rot = (self.rot + m) % 6;
        let mut sign = self.sign;
        if self.edge.is_eta() && rot >= 3 {
            rot -= 3;
            sign = -sign;
        }
        SlotEdge {
            edge: self.edge,
            rot,
            sign,
        }
    }

    /// The same physical edge traversed the other way.
    pub fn reversed(self) -> SlotEdge {
        SlotEdge {
            edge: self.edge,
            rot: self.rot,
            sign: -self.sign,
        }
    }

    /// The directed-edge class (type, rotation) with the sign folded into a
    /// canonical eta representative.
    pub fn class(self) -> (EdgeType, u8) {
        (self.edge, self.rot)
    }
}

/// The combinatorial hexagon of one meta-tile: the edge occurrence on each of
/// the six sides (side k runs counterclockwise between corners k and k+1,
/// corners at angles 60k degrees), and the vertex type at each corner.
#[derive(Clone, Copy, Debug)]
pub struct CombHexagon {
    pub tile: Tile,
    pub slots: [SlotEdge; 6],
    pub corners: [VertexType; 6],
}

use EdgeType as E;
use VertexType as V;

const fn se(edge: EdgeType, rot: u8, sign: i8) -> SlotEdge {
    SlotEdge::new(edge, rot, sign)
}

pub const COMB_HEXAGONS: [CombHexagon; 9] = [
    CombHexagon {
        tile: Tile::Gamma,
        slots: [
            se(E::Beta, 4, -1),
            se(E::Beta, 2, 1),
            se(E::Alpha, 3, 1),
            se(E::Alpha, 1, -1),
            se(E::Gamma, 5, 1),
            se(E::Delta, 0, 1),
        ],
        corners: [V::S, V::Q, V::S, V::P, V::S, V::S],
    },
    CombHexagon {
        tile: Tile::Delta,
        slots: [
            se(E::Gamma, 1, 1),
            se(E::Zeta, 2, 1),
            se(E::Gamma, 0, -1),
            se(E::Beta, 1, -1),
            se(E::Epsilon, 5, 1),
            se(E::Alpha, 3, -1),
        ],
        corners: [V::S, V::S, V::S, V::S, V::Q, V::P],
    },
    CombHexagon {
        tile: Tile::Theta,
        slots: [
            se(E::Eta, 1, 1),
            se(E::Beta, 2, 1),
            se(E::Gamma, 0, -1),
            se(E::Beta, 1, -1),
            se(E::Theta, 2, -1),
            se(E::Beta, 3, -1),
        ],
        corners: [V::Q, V::Q, V::S, V::S, V::Q, V::S],
    },
    CombHexagon {
        tile: Tile::Lambda,
        slots: [
            se(E::Theta, 1, 1),
            se(E::Beta, 2, 1),
            se(E::Gamma, 0, -1),
            se(E::Beta, 1, -1),
            se(E::Epsilon, 5, 1),
            se(E::Alpha, 3, -1),
        ],
        corners: [V::S, V::Q, V::S, V::S, V::Q, V::P],
    },
    CombHexagon {
        tile: Tile::Xi,
        slots: [
            se(E::Eta, 1, 1),
            se(E::Beta, 2, 1),
            se(E::Alpha, 3, 1),
            se(E::Epsilon, 1, -1),
            se(E::Theta, 2, -1),
            se(E::Beta, 3, -1),
        ],
        corners: [V::Q, V::Q, V::S, V::P, V::Q, V::S],
    },
    CombHexagon {
        tile: Tile::Pi,
        slots: [
            se(E::Theta, 1, 1),
            se(E::Beta, 2, 1),
            se(E::Alpha, 3, 1),
            se(E::Epsilon, 1, -1),
            se(E::Epsilon, 5, 1),
            se(E::Alpha, 3, -1),
        ],
        corners: [V::S, V::Q, V::S, V::P, V::Q, V::P],
    },
    CombHexagon {
        tile: Tile::Sigma,
        slots: [
            se(E::Gamma, 1, 1),
            se(E::Delta, 5, -1),
            se(E::Zeta, 0, -1),
            se(E::Beta, 1, -1),
            se(E::Epsilon, 5, 1),
            se(E::Alpha, 3, -1),
        ],
        corners: [V::S, V::S, V::S, V::S, V::Q, V::P],
    },
    CombHexagon {
        tile: Tile::Phi,
        slots: [
            se(E::Eta, 1, 1),
            se(E::Beta, 2, 1),
            se(E::Gamma, 0, -1),
            se(E::Beta, 1, -1),
            se(E::Epsilon, 5, 1),
            se(E::Epsilon, 3, -1),
        ],
        corners: [V::Q, V::Q, V::S, V::S, V::Q, V::P],
    },
    CombHexagon {
        tile: Tile::Psi,
        slots: [
            se(E::Eta, 1, 1),
            se(E::Beta, 2, 1),
            se(E::Alpha, 3, 1),
            se(E::Epsilon, 1, -1),
            se(E::Epsilon, 5, 1),
            se(E::Epsilon, 3, -1),
        ],
        corners: [V::Q, V::Q, V::S, V::P, V::Q, V::P],
    },
];

pub fn comb_hexagon(tile: Tile) -> &'static CombHexagon {
    &COMB_HEXAGONS[tile.index()]
}

pub fn vertex_classes() -> Vec<CellClass> {
    vec![CellClass::VertexP, CellClass::VertexQ, CellClass::VertexS]
}

pub fn edge_classes() -> Vec<CellClass> {
    (0..8).map(|i| CellClass::Edge(i as u8)).collect()
}

pub fn face_classes() -> Vec<CellClass> {
    (0..9).map(|i| CellClass::Face(i as u8)).collect()
}

fn p(terms: &[(i64, usize)]) -> Poly6 {
    Poly6::from_monomials(terms)
}

/// The boundary map on edges, one column per edge type, rows (p, q, s).
pub fn partial1() -> GroupRingMatrix {
    let mut m = GroupRingMatrix::new(vertex_classes(), edge_classes());
    let rows: [[&[(i64, usize)]; 8]; 3] = [
        // p row
        [
            &[(1, 0)],
            &[],
            &[],
            &[],
            &[(1, 0)],
            &[],
            &[],
            &[],
        ],
        // q row
        [
            &[],
            &[(-1, 1)],
            &[],
            &[],
            &[(-1, 1)],
            &[],
            &[(1, 0)],
            &[(1, 0), (-1, 1)],
        ],
        // s row
        [
            &[(-1, 3)],
            &[(1, 4)],
            &[(1, 0), (-1, 5)],
            &[(1, 2), (-1, 5)],
            &[],
            &[(1, 4), (-1, 5)],
            &[(-1, 5)],
            &[],
        ],
    ];
    for (i, row) in rows.iter().enumerate() {
        for (j, terms) in row.iter().enumerate() {
            m.set(i, j, p(terms));
        }
    }
    m
}

/// The boundary map of faces, one column per face, rows are edge types.
pub fn partial2() -> GroupRingMatrix {
    let mut m = GroupRingMatrix::new(edge_classes(), face_classes());
    let rows: [[&[(i64, usize)]; 9]; 8] = [
        // alpha
        [
            &[(1, 3), (-1, 1)],
            &[(-1, 3)],
            &[],
            &[(-1, 3)],
            &[(1, 3)],
            &[],
            &[(-1, 3)],
            &[],
            &[(1, 3)],
        ],
        // beta
        [
            &[(1, 2), (-1, 4)],
            &[(-1, 1)],
            &[(-1, 1), (1, 2), (-1, 3)],
            &[(1, 2), (-1, 1)],
            &[(1, 2), (-1, 3)],
            &[(1, 2)],
            &[(-1, 1)],
            &[(1, 2), (-1, 1)],
            &[(1, 2)],
        ],
        // gamma
        [
            &[(1, 5)],
            &[(1, 1), (-1, 0)],
            &[(-1, 0)],
            &[(-1, 0)],
            &[],
            &[],
            &[(1, 1)],
            &[(-1, 0)],
            &[],
        ],
        // delta
        [
            &[(1, 0)],
            &[],
            &[],
            &[],
            &[],
            &[],
            &[(-1, 5)],
            &[],
            &[],
        ],
        // epsilon
        [
            &[],
            &[(1, 5)],
            &[],
            &[(1, 5)],
            &[(-1, 1)],
            &[(1, 5), (-1, 1)],
            &[(1, 5)],
            &[(1, 5), (-1, 3)],
            &[(-1, 1), (-1, 3), (1, 5)],
        ],
        // zeta
        [
            &[],
            &[(1, 2)],
            &[],
            &[],
            &[],
            &[],
            &[(-1, 0)],
            &[],
            &[],
        ],
        // theta
        [
            &[],
            &[],
            &[(-1, 2)],
            &[(1, 1)],
            &[(-1, 2)],
            &[(1, 1)],
            &[],
            &[],
            &[],
        ],
        // eta
        [
            &[],
            &[],
            &[(1, 1)],
            &[],
            &[(1, 1)],
            &[],
            &[],
            &[(1, 1)],
            &[(1, 1)],
        ],
    ];
    for (i, row) in rows.iter().enumerate() {
        for (j, terms) in row.iter().enumerate() {
            m.set(i, j, p(terms));
        }
    }
    m
}

/// The substitution action on edges: column t is the refinement content of
/// the type-t superedge.
pub fn m1_star() -> GroupRingMatrix {
    let mut m = GroupRingMatrix::new(edge_classes(), edge_classes());
    let rows: [[&[(i64, usize)]; 8]; 8] = [
        // alpha
        [
            &[],
            &[(-1, 5)],
            &[],
            &[(1, 2)],
            &[],
            &[(-1, 5)],
            &[],
            &[],
        ],
        // beta
        [
            &[(-1, 5)],
            &[],
            &[(1, 2)],
            &[(1, 1)],
            &[],
            &[],
            &[],
            &[],
        ],
        // gamma
        [&[], &[], &[], &[], &[], &[], &[], &[]],
        // delta
        [&[], &[], &[], &[], &[], &[], &[], &[]],
        // epsilon
        [
            &[(1, 2)],
            &[(1, 1)],
            &[(1, 1), (-1, 5)],
            &[(-1, 4)],
            &[(1, 1), (1, 2), (-1, 5)],
            &[(1, 1)],
            &[(1, 1), (1, 2), (-1, 4), (-1, 5)],
            &[(1, 1), (1, 2), (-1, 4), (-1, 5)],
        ],
        // zeta
        [&[], &[], &[], &[], &[], &[], &[], &[]],
        // theta
        [
            &[],
            &[],
            &[(1, 2)],
            &[(1, 2), (-1, 5)],
            &[],
            &[(1, 2)],
            &[(1, 2)],
            &[],
        ],
        // eta
        [
            &[(1, 3)],
            &[],
            &[(-1, 0)],
            &[],
            &[(-1, 0)],
            &[],
            &[(-1, 0)],
            &[(1, 3)],
        ],
    ];
    for (i, row) in rows.iter().enumerate() {
        for (j, terms) in row.iter().enumerate() {
            m.set(i, j, p(terms));
        }
    }
    m
}

/// The substitution action on faces: entry (T, S) collects r^m over the
/// children of type T at rotation m inside the type-S supertile.
pub fn m2_star() -> GroupRingMatrix {
    let mut m = GroupRingMatrix::new(face_classes(), face_classes());
    let rows: [[&[(i64, usize)]; 9]; 9] = [
        // Gamma: one per supertile, unrotated
        [
            &[(1, 0)],
            &[(1, 0)],
            &[(1, 0)],
            &[(1, 0)],
            &[(1, 0)],
            &[(1, 0)],
            &[(1, 0)],
            &[(1, 0)],
            &[(1, 0)],
        ],
        // Delta: one per supertile at r^5
        [
            &[(1, 5)],
            &[(1, 5)],
            &[(1, 5)],
            &[(1, 5)],
            &[(1, 5)],
            &[(1, 5)],
            &[(1, 5)],
            &[(1, 5)],
            &[(1, 5)],
        ],
        // Theta
        [
            &[(1, 0)],
            &[],
            &[],
            &[],
            &[],
            &[],
            &[],
            &[],
            &[],
        ],
        // Lambda
        [
            &[],
            &[],
            &[],
            &[],
            &[],
            &[],
            &[(1, 2)],
            &[],
            &[],
        ],
        // Xi
        [
            &[(1, 1)],
            &[(1, 4), (1, 5)],
            &[],
            &[(1, 5)],
            &[],
            &[(1, 5)],
            &[(1, 4), (1, 5)],
            &[],
            &[],
        ],
        // Pi
        [
            &[(1, 4)],
            &[(1, 1)],
            &[(1, 1), (1, 5)],
            &[(1, 1)],
            &[(1, 5)],
            &[],
            &[(1, 1)],
            &[(1, 1)],
            &[],
        ],
        // Sigma: one per supertile at r
        [
            &[(1, 1)],
            &[(1, 1)],
            &[(1, 1)],
            &[(1, 1)],
            &[(1, 1)],
            &[(1, 1)],
            &[(1, 1)],
            &[(1, 1)],
            &[(1, 1)],
        ],
        // Phi
        [
            &[(1, 2)],
            &[(1, 0), (1, 2)],
            &[(1, 0), (1, 2)],
            &[(1, 0), (1, 2)],
            &[(1, 0), (1, 2)],
            &[(1, 0), (1, 2)],
            &[(1, 0)],
            &[(1, 0), (1, 2)],
            &[(1, 0), (1, 2)],
        ],
        // Psi
        [
            &[],
            &[],
            &[(1, 4)],
            &[(1, 4)],
            &[(1, 1), (1, 4)],
            &[(1, 1), (1, 4)],
            &[],
            &[(1, 4), (1, 5)],
            &[(1, 1), (1, 4), (1, 5)],
        ],
    ];
    for (i, row) in rows.iter().enumerate() {
        for (j, terms) in row.iter().enumerate() {
            m.set(i, j, p(terms));
        }
    }
    m
}

/// Head and tail vertex classes (type, rotation) of a standard directed edge,
/// read off the d1 column: the positive monomial is the head, the negative
/// the tail.
pub fn edge_endpoints(e: EdgeType) -> ((VertexType, u8), (VertexType, u8)) {
    let d1 = partial1();
    let j = e.index();
    let mut head = None;
    let mut tail = None;
    for (i, vt) in [VertexType::P, VertexType::Q, VertexType::S]
        .iter()
        .enumerate()
    {
        let poly = d1.get(i, j);
        for (m, &c) in poly.c.iter().enumerate() {
            match c {
                0 => {}
                1 => {
                    assert!(head.is_none(), "two heads in d1 column {j}");
                    head = Some((*vt, m as u8));
                }
                -1 => {
                    assert!(tail.is_none(), "two tails in d1 column {j}");
                    tail = Some((*vt, m as u8));
                }
                _ => panic!("unexpected coefficient in d1"),
            }
        }
    }
    (head.expect("head"), tail.expect("tail"))
}

/// Vertex class of head/tail after rotating a directed edge occurrence and
/// accounting for traversal sign.  Returns classes with rotation reduced mod
/// the vertex isotropy.
pub fn traversal_endpoints(s: SlotEdge) -> ((VertexType, u8), (VertexType, u8)) {
    let (head, tail) = edge_endpoints(s.edge);
    let rot = |(vt, m): (VertexType, u8), by: u8| -> (VertexType, u8) {
        (vt, (m + by) % vt.class_modulus())
    };
    let h = rot(head, s.rot);
    let t = rot(tail, s.rot);
    if s.sign > 0 {
        (h, t)
    } else {
        (t, h)
    }
}
