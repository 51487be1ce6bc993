//! Bottom eigenpairs of the normalized Laplacian and the vertex embedding
//! built from them.

use bufpart::generators::clique_ring;
use bufpart::spectral::{eigenbasis, embed, EigenMethod, EigenOptions};

fn main() -> bufpart::Result<()> {
    let (g, _) = clique_ring(&[12, 12, 12], 0.05);
    let k = 3;
    let basis = eigenbasis(&g, k, &EigenOptions::default())?;
    println!("method {:?}", basis.method);
    for (i, (l, r)) in basis.values.iter().zip(&basis.residuals).enumerate() {
        println!("λ_{} = {l:.6e}   residual {r:.1e}", i + 1);
    }

    // The Lanczos path agrees with the dense one.
    let lz = eigenbasis(&g, k, &EigenOptions { method: EigenMethod::Lanczos, ..Default::default() })?;
    println!("lanczos λ_k = {:.6e} after {} matvecs", lz.lambda(k), lz.matvecs);

    let e = embed(&g, &basis)?;
    // Σ μ(u) = k and the embedding energy is Σ λ_i.
    println!("total measure {:.12}", e.total_measure());
    println!("energy {:.12e} vs Σλ {:.12e}", e.energy(&g), basis.values.iter().sum::<f64>());
    for u in [0, 11, 12, 24] {
        println!("vertex {u}: μ = {:.4}  ψ = {:?}", e.measure(u), e.psi(u).iter().map(|x| (x * 1e3).round() / 1e3).collect::<Vec<_>>());
    }
    println!("ψ-distance within a clique {:.3}, across {:.3}", e.psi_distance(0, 5), e.psi_distance(0, 20));
    Ok(())
}
