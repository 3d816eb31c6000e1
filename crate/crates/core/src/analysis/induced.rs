use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};

use crate::clique::CliqueSet;
use crate::ingest::LabelSet;
use crate::stream::{BipartiteLinkStream, NodeId, Side};
use crate::time::Time;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphNode {
    pub name: String,
    pub side: Side,
    pub anomalous: bool,
}

/// Union of the cliques selected by a start-time window: their nodes, and
/// every top/bottom pair they contain as an edge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InducedGraph {
    pub nodes: Vec<GraphNode>,
    /// Indices into `nodes`, top endpoint first.
    pub edges: Vec<(usize, usize)>,
    /// Number of cliques that contributed.
    pub cliques: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub nodes: Vec<usize>,
    pub anomalous: usize,
    pub normal: usize,
}

/// Cliques with `window_start <= begin < window_end` and at least `min_size`
/// nodes, merged into one graph.
pub fn induced_graph(
    cliques: &CliqueSet,
    stream: &BipartiteLinkStream,
    window_start: Time,
    window_end: Time,
    min_size: usize,
    labels: &LabelSet,
) -> InducedGraph {
    let mut nodes: BTreeSet<NodeId> = BTreeSet::new();
    let mut edges: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    let mut used = 0;
    for c in cliques.min_size(min_size) {
        let begin = c.interval().begin();
        if begin < window_start || begin >= window_end {
            continue;
        }
        used += 1;
        nodes.extend(c.nodes());
        for &u in c.top() {
            for &v in c.bottom() {
                edges.insert((u, v));
            }
        }
    }
    let index: BTreeMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    InducedGraph {
        nodes: nodes
            .iter()
            .map(|&id| GraphNode {
                name: stream.name(id).to_owned(),
                side: stream.side(id),
                anomalous: labels.contains(stream.name(id)),
            })
            .collect(),
        edges: edges.iter().map(|(u, v)| (index[u], index[v])).collect(),
        cliques: used,
    }
}

impl InducedGraph {
    pub fn is_bipartite(&self) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| self.nodes[u].side == Side::Top && self.nodes[v].side == Side::Bottom)
    }

    /// Connected components, largest first.
    pub fn components(&self) -> Vec<Component> {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in &self.edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.nodes.len() {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(i);
        }
        let mut out: Vec<Component> = groups
            .into_values()
            .map(|nodes| {
                let anomalous = nodes.iter().filter(|&&i| self.nodes[i].anomalous).count();
                Component {
                    normal: nodes.len() - anomalous,
                    anomalous,
                    nodes,
                }
            })
            .collect();
        out.sort_by(|a, b| b.nodes.len().cmp(&a.nodes.len()).then(a.nodes.cmp(&b.nodes)));
        out
    }

    pub fn write_edges_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "src,dst")?;
        for &(u, v) in &self.edges {
            writeln!(w, "{},{}", self.nodes[u].name, self.nodes[v].name)?;
        }
        Ok(())
    }

    pub fn write_nodes_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "node,side,anomalous")?;
        for n in &self.nodes {
            writeln!(w, "{},{},{}", n.name, n.side, n.anomalous)?;
        }
        Ok(())
    }

    /// GraphML, readable by Gephi, Cytoscape, networkx and friends.
    pub fn write_graphml<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
        writeln!(w, r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#)?;
        writeln!(w, r#"  <key id="name" for="node" attr.name="name" attr.type="string"/>"#)?;
        writeln!(w, r#"  <key id="side" for="node" attr.name="side" attr.type="string"/>"#)?;
        writeln!(w, r#"  <key id="anomalous" for="node" attr.name="anomalous" attr.type="boolean"/>"#)?;
        writeln!(w, r#"  <graph id="induced" edgedefault="undirected">"#)?;
        for (i, n) in self.nodes.iter().enumerate() {
            writeln!(
                w,
                r#"    <node id="n{i}"><data key="name">{}</data><data key="side">{}</data><data key="anomalous">{}</data></node>"#,
                xml_escape(&n.name),
                n.side,
                n.anomalous
            )?;
        }
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            writeln!(w, r#"    <edge id="e{k}" source="n{u}" target="n{v}"/>"#)?;
        }
        writeln!(w, "  </graph>")?;
        writeln!(w, "</graphml>")
    }
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::Clique;
    use crate::interval::Interval;
    use crate::stream::StreamBuilder;

    fn stream() -> BipartiteLinkStream {
        let mut b = StreamBuilder::new(Interval::secs(0, 10));
        for t in ["t1", "t2", "t3"] {
            for u in ["b1", "b2", "b3"] {
                b.link(t, u, [Interval::secs(0, 10)]);
            }
        }
        b.build().unwrap()
    }

    #[test]
    fn shared_top_node_connects() {
        let s = stream();
        let c1 = Clique::from_names(&s, &["t1", "t2"], &["b1", "b2"], Interval::secs(1, 2)).unwrap();
        let c2 = Clique::from_names(&s, &["t2", "t3"], &["b3"], Interval::secs(1, 3)).unwrap();
        let set: CliqueSet = [c1, c2].into_iter().collect();
        let g = induced_graph(&set, &s, Time::from_secs(0), Time::from_secs(5), 3, &["t2"].into_iter().collect());
        assert!(g.is_bipartite());
        assert_eq!(g.nodes.len(), 6);
        assert_eq!(g.edges.len(), 6);
        let comps = g.components();
        assert_eq!(comps.len(), 1);
        assert_eq!((comps[0].anomalous, comps[0].normal), (1, 5));
    }

    #[test]
    fn window_is_half_open_on_begin() {
        let s = stream();
        let c = Clique::from_names(&s, &["t1", "t2"], &["b1", "b2"], Interval::secs(5, 6)).unwrap();
        let set: CliqueSet = [c].into_iter().collect();
        let none = LabelSet::new();
        assert_eq!(induced_graph(&set, &s, Time::from_secs(5), Time::from_secs(6), 4, &none).cliques, 1);
        assert_eq!(induced_graph(&set, &s, Time::from_secs(4), Time::from_secs(5), 4, &none).cliques, 0);
        let empty = induced_graph(&set, &s, Time::from_secs(0), Time::from_secs(1), 4, &none);
        assert!(empty.nodes.is_empty() && empty.edges.is_empty() && empty.components().is_empty());
    }

    #[test]
    fn exports() {
        let s = stream();
        let c = Clique::from_names(&s, &["t1"], &["b1", "b2"], Interval::secs(1, 2)).unwrap();
        let g = induced_graph(&[c].into_iter().collect(), &s, Time::ZERO, Time::from_secs(10), 2, &LabelSet::new());
        let mut edges = Vec::new();
        g.write_edges_csv(&mut edges).unwrap();
        assert_eq!(String::from_utf8(edges).unwrap(), "src,dst\nt1,b1\nt1,b2\n");
        let mut nodes = Vec::new();
        g.write_nodes_csv(&mut nodes).unwrap();
        assert!(String::from_utf8(nodes).unwrap().starts_with("node,side,anomalous\nt1,top,false\n"));
        let mut xml = Vec::new();
        g.write_graphml(&mut xml).unwrap();
        let xml = String::from_utf8(xml).unwrap();
        assert_eq!(xml.matches("<node ").count(), 3);
        assert_eq!(xml.matches("<edge ").count(), 2);
        assert_eq!(xml_escape("a<&>\"'"), "a&lt;&amp;&gt;&quot;&apos;");
    }
}
