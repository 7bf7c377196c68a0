use num_complex::Complex64;
fn main() {
    let patch = caspr::inflation::generate_patch(caspr::apdata::Tile::Psi, 4).unwrap();
    let imgs = caspr::reproject::return_module_map(caspr::reproject::ReprojectionKind::Hexagon, &patch).unwrap();
    let l = caspr::zmodule::known::return_module();
    let gens = l.basis_elements();
    // Solve hex(g) = B1 x + B2 conj(x) + B3 xs + B4 conj(xs) for complex B's.
    // 8 real unknowns, 8 real equations.
    let mut a = vec![vec![0.0f64; 8]; 8];
    let mut rhs = vec![0.0f64; 8];
    let om = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
    for (i, g) in gens.iter().enumerate() {
        let x = g.embed();
        let xs = g.embed_internal();
        let h = Complex64::new(
            num_traits::ToPrimitive::to_f64(&imgs[i].a).unwrap(), 0.0)
            + om * num_traits::ToPrimitive::to_f64(&imgs[i].b).unwrap();
        // coefficients multiply complexes: for unknown B = p + iq and input w:
        // B w = (p + iq)(wr + i wi): re = p wr - q wi; im = p wi + q wr
        let inputs = [x, x.conj(), xs, xs.conj()];
        for (j, w) in inputs.iter().enumerate() {
            a[2 * i][2 * j] = w.re;      // p coefficient in re
            a[2 * i][2 * j + 1] = -w.im; // q coefficient in re
            a[2 * i + 1][2 * j] = w.im;
            a[2 * i + 1][2 * j + 1] = w.re;
        }
        rhs[2 * i] = h.re;
        rhs[2 * i + 1] = h.im;
    }
    // Gaussian solve
    for k in 0..8 {
        let piv = (k..8).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap()).unwrap();
        a.swap(k, piv); rhs.swap(k, piv);
        for i in 0..8 {
            if i == k { continue; }
            let f = a[i][k] / a[k][k];
            for j in k..8 { a[i][j] -= f * a[k][j]; }
            rhs[i] -= f * rhs[k];
        }
    }
    let sol: Vec<f64> = (0..8).map(|i| rhs[i] / a[i][i]).collect();
    for (name, j) in [("B1 (x)", 0), ("B2 (conj x)", 1), ("B3 (x*)", 2), ("B4 (conj x*)", 3)] {
        println!("{name}: {:.6} + {:.6} i   |.| = {:.6}", sol[2*j], sol[2*j+1],
                 (sol[2*j].powi(2) + sol[2*j+1].powi(2)).sqrt());
    }
}
