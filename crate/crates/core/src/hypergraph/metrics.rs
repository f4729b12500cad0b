use super::{Hypergraph, PartitionAssignment, WeightedGraph};
use crate::error::{Error, Result};

/// Number of nets whose pins span two or more parts. A spanning net counts
/// once no matter how many parts it touches.
pub fn hyperedge_cut(hg: &Hypergraph, pa: &PartitionAssignment) -> Result<usize> {
    pa.ensure_len(hg.num_nodes(), "hypergraph")?;
    let parts = pa.parts();
    Ok(hg
        .nets()
        .iter()
        .filter(|net| {
            let first = parts[net[0]];
            net[1..].iter().any(|&v| parts[v] != first)
        })
        .count())
}

/// Total weighted degree of the nodes in `part`.
pub fn partition_volume(g: &WeightedGraph, pa: &PartitionAssignment, part: usize) -> Result<f64> {
    pa.ensure_len(g.num_nodes(), "graph")?;
    if part >= pa.k() {
        return Err(Error::contract(format!(
            "part {part} out of range for k = {}",
            pa.k()
        )));
    }
    Ok(pa
        .parts()
        .iter()
        .zip(g.degrees())
        .filter(|(&p, _)| p == part)
        .map(|(_, &d)| d)
        .sum())
}

/// Weight of the edges leaving `part`.
pub fn cut_weight(g: &WeightedGraph, pa: &PartitionAssignment, part: usize) -> Result<f64> {
    pa.ensure_len(g.num_nodes(), "graph")?;
    if part >= pa.k() {
        return Err(Error::contract(format!(
            "part {part} out of range for k = {}",
            pa.k()
        )));
    }
    let parts = pa.parts();
    Ok(g.edges()
        .iter()
        .filter(|&&(u, v, _)| (parts[u] == part) != (parts[v] == part))
        .map(|e| e.2)
        .sum())
}

/// `Σ_k cut(S_k, S̄_k) / vol(S_k)` over every part `0..k`.
pub fn simple_ncut(g: &WeightedGraph, pa: &PartitionAssignment) -> Result<f64> {
    pa.ensure_len(g.num_nodes(), "graph")?;
    let k = pa.k();
    let parts = pa.parts();
    let mut cut = vec![0.0; k];
    let mut vol = vec![0.0; k];
    for (v, &d) in g.degrees().iter().enumerate() {
        vol[parts[v]] += d;
    }
    for &(u, v, w) in g.edges() {
        let (pu, pv) = (parts[u], parts[v]);
        if pu != pv {
            cut[pu] += w;
            cut[pv] += w;
        }
    }
    let mut total = 0.0;
    for part in 0..k {
        if vol[part] <= 0.0 {
            return Err(Error::DegeneratePartition { part });
        }
        total += cut[part] / vol[part];
    }
    Ok(total)
}

/// Fraction of nodes in the largest part.
pub fn balancedness(pa: &PartitionAssignment) -> Result<f64> {
    if pa.is_empty() {
        return Err(Error::contract("balancedness of an empty assignment"));
    }
    let largest = pa.sizes().into_iter().max().unwrap_or(0);
    Ok(largest as f64 / pa.len() as f64)
}

/// Like [`balancedness`], ignoring nodes whose weight is zero (star hubs).
pub fn balancedness_weighted(pa: &PartitionAssignment, node_weights: &[u32]) -> Result<f64> {
    pa.ensure_len(node_weights.len(), "weight vector")?;
    let mut sizes = vec![0usize; pa.k()];
    let mut total = 0usize;
    for (&p, &w) in pa.parts().iter().zip(node_weights) {
        if w > 0 {
            sizes[p] += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(Error::contract("balancedness with no weighted nodes"));
    }
    Ok(*sizes.iter().max().unwrap() as f64 / total as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> WeightedGraph {
        WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap()
    }

    fn pa(parts: &[usize], k: usize) -> PartitionAssignment {
        PartitionAssignment::new(parts.to_vec(), k).unwrap()
    }

    fn bridged_triangles() -> Hypergraph {
        Hypergraph::new(
            6,
            vec![
                vec![0, 1],
                vec![1, 2],
                vec![0, 2],
                vec![3, 4],
                vec![4, 5],
                vec![3, 5],
                vec![2, 3],
            ],
        )
        .unwrap()
    }

    #[test]
    fn cut_of_single_spanning_net() {
        let hg = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(hyperedge_cut(&hg, &pa(&[0, 0, 1], 2)).unwrap(), 1);
        assert_eq!(hyperedge_cut(&hg, &pa(&[0, 0, 0], 2)).unwrap(), 0);
    }

    #[test]
    fn cut_counts_multi_part_net_once() {
        let hg = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(hyperedge_cut(&hg, &pa(&[0, 1, 2], 3)).unwrap(), 1);
    }

    #[test]
    fn cut_of_bridged_triangles() {
        let hg = bridged_triangles();
        assert_eq!(hyperedge_cut(&hg, &pa(&[0, 0, 0, 1, 1, 1], 2)).unwrap(), 1);
    }

    #[test]
    fn cut_length_mismatch() {
        let hg = bridged_triangles();
        assert!(matches!(
            hyperedge_cut(&hg, &pa(&[0, 1], 2)),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn volumes() {
        let g = c4();
        assert_eq!(partition_volume(&g, &pa(&[0, 0, 1, 1], 2), 0).unwrap(), 4.0);
        assert_eq!(partition_volume(&g, &pa(&[1, 1, 1, 1], 2), 0).unwrap(), 0.0);
        assert!(partition_volume(&g, &pa(&[0, 0, 1, 1], 2), 2).is_err());

        let third = 1.0 / 3.0;
        let tri = WeightedGraph::from_edges(3, [(0, 1, third), (0, 2, third), (1, 2, third)]).unwrap();
        let v = partition_volume(&tri, &pa(&[0, 1, 1], 2), 0).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ncut_examples() {
        assert_eq!(simple_ncut(&c4(), &pa(&[0, 0, 1, 1], 2)).unwrap(), 1.0);

        let third = 1.0 / 3.0;
        let tri = WeightedGraph::from_edges(3, [(0, 1, third), (0, 2, third), (1, 2, third)]).unwrap();
        let v = simple_ncut(&tri, &pa(&[0, 1, 1], 2)).unwrap();
        assert!((v - 1.5).abs() < 1e-12);

        let k4 = WeightedGraph::from_edges(
            4,
            [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        let v = simple_ncut(&k4, &pa(&[0, 0, 1, 1], 2)).unwrap();
        assert!((v - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ncut_zero_volume_is_an_error() {
        assert!(matches!(
            simple_ncut(&c4(), &pa(&[0, 0, 0, 0], 2)),
            Err(Error::DegeneratePartition { part: 1 })
        ));
    }

    #[test]
    fn balancedness_examples() {
        assert_eq!(balancedness(&pa(&[0, 0, 0, 1], 2)).unwrap(), 0.75);
        assert_eq!(balancedness(&pa(&[1, 1, 1], 2)).unwrap(), 1.0);
        assert!(balancedness(&pa(&[], 2)).is_err());
        assert_eq!(
            balancedness_weighted(&pa(&[0, 1, 1, 1], 2), &[1, 1, 0, 0]).unwrap(),
            0.5
        );
    }
}
