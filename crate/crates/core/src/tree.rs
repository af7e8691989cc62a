//! Index-based working view over a [`Sentence`] used by the swap engine and
//! the language policies.
//!
//! Nodes are dense indices into the sentence's token vector as it was when
//! the view was built. The view tracks a mutable surface order on top of a
//! fixed head structure.

use alloc::vec;
use alloc::vec::Vec;

use crate::sentence::{validate_tree, Head, Sentence, Token, TokenId, Violation};

pub type Node = usize;

#[derive(Clone, Debug)]
pub struct DepTree<'a> {
    sentence: &'a Sentence,
    parent: Vec<Option<Node>>,
    children: Vec<Vec<Node>>,
    root: Node,
    order: Vec<Node>,
    pos: Vec<usize>,
}

impl<'a> DepTree<'a> {
    /// Builds the view; fails with the sentence's violations if it is not a
    /// well-formed tree.
    pub fn new(sentence: &'a Sentence) -> Result<Self, Vec<Violation>> {
        let violations = validate_tree(sentence);
        if !violations.is_empty() {
            return Err(violations);
        }
        let tokens = sentence.tokens();
        let mut by_id: Vec<(TokenId, Node)> =
            tokens.iter().enumerate().map(|(i, t)| (t.id, i)).collect();
        by_id.sort_unstable();
        let lookup = |id: TokenId| {
            by_id
                .binary_search_by(|probe| probe.0.cmp(&id))
                .map(|i| by_id[i].1)
                .ok()
        };

        let mut parent = vec![None; tokens.len()];
        let mut children = vec![Vec::new(); tokens.len()];
        let mut root = 0;
        for (i, t) in tokens.iter().enumerate() {
            match t.head {
                Head::Root => root = i,
                Head::Token(h) => {
                    let p = lookup(h).expect("validated head");
                    parent[i] = Some(p);
                    children[p].push(i);
                }
            }
        }

        Ok(DepTree {
            sentence,
            parent,
            children,
            root,
            order: (0..tokens.len()).collect(),
            pos: (0..tokens.len()).collect(),
        })
    }

    pub fn sentence(&self) -> &'a Sentence {
        self.sentence
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn token(&self, node: Node) -> &'a Token {
        &self.sentence.tokens()[node]
    }

    pub fn id(&self, node: Node) -> TokenId {
        self.token(node).id
    }

    pub fn root(&self) -> Node {
        self.root
    }

    pub fn parent(&self, node: Node) -> Option<Node> {
        self.parent[node]
    }

    /// Children in the sentence's original surface order.
    pub fn children(&self, node: Node) -> &[Node] {
        &self.children[node]
    }

    /// Children sorted by their current surface position.
    pub fn children_by_position(&self, node: Node) -> Vec<Node> {
        let mut kids = self.children[node].clone();
        kids.sort_unstable_by_key(|&c| self.pos[c]);
        kids
    }

    pub fn position(&self, node: Node) -> usize {
        self.pos[node]
    }

    pub fn node_at(&self, position: usize) -> Node {
        self.order[position]
    }

    /// Current surface order as node indices.
    pub fn order(&self) -> &[Node] {
        &self.order
    }

    /// The node and all of its descendants, in no particular order.
    pub fn subtree(&self, node: Node) -> Vec<Node> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            out.push(n);
            stack.extend_from_slice(&self.children[n]);
        }
        out
    }

    pub fn is_descendant_or_self(&self, node: Node, ancestor: Node) -> bool {
        let mut cur = Some(node);
        while let Some(n) = cur {
            if n == ancestor {
                return true;
            }
            cur = self.parent[n];
        }
        false
    }

    /// Children of `node` whose base relation is `rel`.
    pub fn children_with_rel<'s>(
        &'s self,
        node: Node,
        rel: &'s str,
    ) -> impl Iterator<Item = Node> + 's {
        self.children[node]
            .iter()
            .copied()
            .filter(move |&c| self.token(c).base_rel() == rel)
    }

    pub fn has_child_rel(&self, node: Node, rel: &str) -> bool {
        self.children_with_rel(node, rel).next().is_some()
    }

    /// Sorts nodes by current position.
    pub fn sort_by_position(&self, nodes: &mut [Node]) {
        nodes.sort_unstable_by_key(|&n| self.pos[n]);
    }

    /// `(first, last)` surface positions covered by `nodes`.
    pub fn extent(&self, nodes: &[Node]) -> Option<(usize, usize)> {
        let first = nodes.iter().map(|&n| self.pos[n]).min()?;
        let last = nodes.iter().map(|&n| self.pos[n]).max()?;
        Some((first, last))
    }

    /// True if `nodes` (without duplicates) occupy consecutive positions.
    pub fn is_contiguous(&self, nodes: &[Node]) -> bool {
        match self.extent(nodes) {
            Some((first, last)) => last - first + 1 == nodes.len(),
            None => false,
        }
    }

    /// Overwrites the surface order starting at `start` with `region`.
    pub(crate) fn rewrite_region(&mut self, start: usize, region: &[Node]) {
        for (offset, &n) in region.iter().enumerate() {
            self.order[start + offset] = n;
            self.pos[n] = start + offset;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sentence::Token;

    #[test]
    fn builds_children_and_subtrees() {
        let s = Sentence::new(vec![
            Token::new(1, "the", "DET", Head::Token(TokenId(2)), "det"),
            Token::new(2, "cat", "NOUN", Head::Token(TokenId(3)), "nsubj"),
            Token::new(3, "sleeps", "VERB", Head::Root, "root"),
        ]);
        let tree = DepTree::new(&s).unwrap();
        assert_eq!(tree.root(), 2);
        assert_eq!(tree.children(2), &[1]);
        let mut sub = tree.subtree(1);
        sub.sort_unstable();
        assert_eq!(sub, vec![0, 1]);
        assert!(tree.is_contiguous(&sub));
        assert!(tree.is_descendant_or_self(0, 2));
        assert!(!tree.is_descendant_or_self(2, 0));
    }

    #[test]
    fn rejects_invalid_sentences() {
        let s = Sentence::new(vec![
            Token::new(1, "a", "X", Head::Root, "root"),
            Token::new(2, "b", "X", Head::Root, "root"),
        ]);
        assert!(DepTree::new(&s).is_err());
    }
}
