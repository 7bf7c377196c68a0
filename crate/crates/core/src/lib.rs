//! Exact-arithmetic engine for the Spectre/CASPr tiling family.
//!
//! The crate reconstructs the whole pipeline around the CASPr tiling, the
//! self-similar member of the Spectre family of aperiodic tilings:
//!
//! * exact arithmetic in the order Z[xi, lambda] of Q(sqrt(-3), sqrt(-5)),
//!   together with its rank-4 Z-module and ideal machinery ([`ring`],
//!   [`zmodule`]);
//! * the Anderson-Putnam complex of the tiling space, with boundary and
//!   substitution matrices over Z[r]/(r^6 - 1), and the Cech cohomology
//!   computation per representation and over Z ([`groupring`], [`apdata`],
//!   [`cohomology`]);
//! * the geometric meta-tiles, the inflation engine with its square-root
//!   reflection step, and patch generation ([`geometry`], [`inflation`]);
//! * the 4:2 cut-and-project scheme, Rauzy-fractal window clouds, density
//!   bookkeeping and the Fourier module ([`cps`]);
//! * Z-linear reprojections onto the hexagonal lattice and the Hat-Turtle
//!   meta-tile lattice ([`reproject`]);
//! * SVG/CSV/report emitters and the acceptance checks ([`render`],
//!   [`patchfile`], [`verify`]).

pub mod apdata;
pub mod cohomology;
pub mod cps;
pub mod geometry;
pub mod groupring;
pub mod inflation;
pub mod intmatrix;
pub mod patchfile;
pub mod render;
pub mod reproject;
pub mod ring;
pub mod rng;
pub mod verify;
pub mod zmodule;

pub use ring::{RealQuadratic, RingElement};
