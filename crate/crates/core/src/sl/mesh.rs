use crate::{Error, Result};

/// How nodes are distributed.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Grading {
    Uniform,
    /// The end element next to each flagged endpoint is split into
    /// `layers` geometric sub-elements with ratio `ratio`.
    Geometric { ratio: f64, layers: usize },
}

/// Grading ratio towards singular endpoints.
pub const GRADING_RATIO: f64 = 0.7;
pub const GRADING_LAYERS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
    grading: Grading,
}

impl Mesh {
    pub fn uniform(length: f64, elements: usize) -> Result<Self> {
        if elements == 0 || !(length > 0.0) {
            return Err(Error::InvalidMesh(format!("{elements} elements on length {length}")));
        }
        let nodes = (0..=elements).map(|i| length * i as f64 / elements as f64).collect();
        Ok(Mesh {
            nodes,
            grading: Grading::Uniform,
        })
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidMesh("need at least two nodes".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidMesh("nodes must be strictly increasing".into()));
        }
        Ok(Mesh {
            nodes,
            grading: Grading::Uniform,
        })
    }

    /// Roughly `elements` elements on `[0, length]`, with nodes at every
    /// breakpoint and at least two elements per segment.
    pub fn with_breakpoints(length: f64, breakpoints: &[f64], elements: usize) -> Result<Self> {
        let mut cuts = vec![0.0];
        cuts.extend(breakpoints.iter().copied().filter(|&b| b > 0.0 && b < length));
        cuts.push(length);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup();
        let mut nodes = vec![0.0];
        for w in cuts.windows(2) {
            let m = ((elements as f64 * (w[1] - w[0]) / length).ceil() as usize).max(2);
            for j in 1..=m {
                nodes.push(w[0] + (w[1] - w[0]) * j as f64 / m as f64);
            }
        }
        *nodes.last_mut().unwrap() = length;
        Self::from_nodes(nodes)
    }

    /// Splits the first and/or last element geometrically.
    pub fn graded(mut self, left: bool, right: bool, ratio: f64, layers: usize) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidMesh(format!("grading ratio {ratio} must lie in (0, 1)")));
        }
        if !(left || right) || layers == 0 {
            return Ok(self);
        }
        let split = |a: f64, b: f64| -> Vec<f64> {
            // nodes a + (b - a) ratio^j, j = layers..1, strictly between a and b
            (1..=layers).rev().map(|j| a + (b - a) * ratio.powi(j as i32)).collect()
        };
        if left {
            let (a, b) = (self.nodes[0], self.nodes[1]);
            let extra = split(a, b);
            self.nodes.splice(1..1, extra);
        }
        if right {
            let n = self.nodes.len();
            let (a, b) = (self.nodes[n - 1], self.nodes[n - 2]);
            let mut extra = split(a, b);
            extra.reverse();
            self.nodes.splice(n - 1..n - 1, extra);
        }
        self.grading = Grading::Geometric { ratio, layers };
        Ok(self)
    }

    /// Halves every element; the new mesh is nested in the old one.
    pub fn refined(&self) -> Mesh {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(*self.nodes.last().unwrap());
        Mesh {
            nodes,
            grading: self.grading,
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn elements(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn length(&self) -> f64 {
        self.nodes[self.nodes.len() - 1] - self.nodes[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_and_refined_are_nested() {
        let m = Mesh::uniform(1.0, 4).unwrap();
        let r = m.refined();
        assert_eq!(r.elements(), 8);
        for x in m.nodes() {
            assert!(r.nodes().contains(x));
        }
    }

    #[test]
    fn graded_nodes_are_geometric_and_increasing() {
        let m = Mesh::uniform(1.0, 10).unwrap().graded(true, true, 0.7, 3).unwrap();
        assert_eq!(m.elements(), 16);
        let x = m.nodes();
        assert!(x.windows(2).all(|w| w[1] > w[0]));
        assert!((x[1] - 0.1 * 0.343).abs() < 1e-15);
        assert!((x[2] - 0.1 * 0.49).abs() < 1e-15);
        assert_eq!(x[0], 0.0);
        assert_eq!(*x.last().unwrap(), 1.0);
        assert!(matches!(m.grading(), Grading::Geometric { .. }));
        assert!(Mesh::uniform(1.0, 2).unwrap().graded(true, false, 1.5, 2).is_err());
    }

    #[test]
    fn breakpoints_become_nodes() {
        let m = Mesh::with_breakpoints(2.0, &[0.999, 1.0, 1.001], 16).unwrap();
        for b in [0.999, 1.0, 1.001] {
            assert!(m.nodes().iter().any(|&x| (x - b).abs() < 1e-15));
        }
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(Mesh::from_nodes(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(Mesh::uniform(1.0, 0).is_err());
    }
}
