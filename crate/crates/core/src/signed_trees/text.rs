//! Nested parenthesized text form, e.g. `((1,2)-,3)+`.

use std::fmt;

use super::{Node, NodeId, Sign, SignedBinaryTree};
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

impl SignedBinaryTree {
    pub fn parse(text: &str) -> Result<SignedBinaryTree> {
        let bytes = text.as_bytes();
        let mut nodes: Vec<Node> = Vec::new();
        // open internal nodes with the number of children seen so far
        let mut open: Vec<(u32, u8)> = Vec::new();
        let mut pos = 0;
        let err = |pos: usize, reason: &str| Error::Parse {
            pos,
            reason: reason.to_string(),
        };
        let attach = |nodes: &mut Vec<Node>, open: &mut Vec<(u32, u8)>, pos: usize| -> Result<()> {
            let id = nodes.len() as u32;
            match open.last_mut() {
                None if id > 0 => Err(err(pos, "trailing input after the root")),
                None => Ok(()),
                Some((_, 2)) => Err(err(pos, "missing `)`")),
                Some((_, 0)) => {
                    open.last_mut().unwrap().1 = 1;
                    Ok(())
                }
                Some((owner, _)) => {
                    let owner = *owner;
                    open.last_mut().unwrap().1 = 2;
                    if let Node::Internal { right, .. } = &mut nodes[owner as usize] {
                        *right = NodeId(id);
                    }
                    Ok(())
                }
            }
        };
        let mut expect_child = true;
        while pos < bytes.len() {
            let c = bytes[pos];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => pos += 1,
                b'(' => {
                    if !expect_child {
                        return Err(err(pos, "unexpected `(`"));
                    }
                    attach(&mut nodes, &mut open, pos)?;
                    let id = nodes.len() as u32;
                    nodes.push(Node::Internal {
                        left: NodeId(id + 1),
                        right: NodeId(NONE),
                        sign: Sign::Plus,
                    });
                    open.push((id, 0));
                    pos += 1;
                }
                b'0'..=b'9' => {
                    if !expect_child {
                        return Err(err(pos, "unexpected leaf"));
                    }
                    let start = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let rank: u32 = text[start..pos]
                        .parse()
                        .map_err(|_| err(start, "leaf rank does not fit in u32"))?;
                    attach(&mut nodes, &mut open, start)?;
                    nodes.push(Node::Leaf { rank });
                    expect_child = false;
                }
                b',' => {
                    match open.last() {
                        Some((_, 1)) if !expect_child => {}
                        _ => return Err(err(pos, "unexpected `,`")),
                    }
                    expect_child = true;
                    pos += 1;
                }
                b')' => {
                    let (id, seen) = open.pop().ok_or_else(|| err(pos, "unbalanced `)`"))?;
                    if seen != 2 || expect_child {
                        return Err(err(pos, "internal node needs exactly two children"));
                    }
                    let sign = match bytes.get(pos + 1) {
                        Some(b'+') => Sign::Plus,
                        Some(b'-') => Sign::Minus,
                        _ => return Err(err(pos + 1, "expected sign `+` or `-` after `)`")),
                    };
                    if let Node::Internal { sign: s, .. } = &mut nodes[id as usize] {
                        *s = sign;
                    }
                    pos += 2;
                }
                _ => return Err(err(pos, "unexpected character")),
            }
        }
        if nodes.is_empty() || !open.is_empty() || expect_child {
            return Err(err(bytes.len(), "unexpected end of input"));
        }
        let mut tree = SignedBinaryTree {
            leaf_counts: vec![0; nodes.len()],
            nodes,
        };
        tree.recount();
        tree.validate()?;
        Ok(tree)
    }

    pub fn to_text(&self) -> String {
        enum Step {
            Visit(NodeId),
            Comma,
            Close(Sign),
        }
        let mut out = String::new();
        let mut stack = vec![Step::Visit(self.root())];
        while let Some(step) = stack.pop() {
            match step {
                Step::Visit(id) => match self.node(id) {
                    Node::Leaf { rank } => out.push_str(&rank.to_string()),
                    Node::Internal { left, right, sign } => {
                        out.push('(');
                        stack.push(Step::Close(sign));
                        stack.push(Step::Visit(right));
                        stack.push(Step::Comma);
                        stack.push(Step::Visit(left));
                    }
                },
                Step::Comma => out.push(','),
                Step::Close(sign) => {
                    out.push(')');
                    out.push(sign.symbol());
                }
            }
        }
        out
    }
}

impl fmt::Display for SignedBinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signed_trees::to_permutation;

    #[test]
    fn round_trip() {
        for text in ["1", "(1,2)+", "((1,2)-,3)+", "(1,(2,(3,4)+)-)-", "((1,2)+,(3,4)-)-"] {
            let t = SignedBinaryTree::parse(text).unwrap();
            assert_eq!(t.to_text(), text);
        }
        let t = SignedBinaryTree::parse(" ( (1 , 2)- , 3 )+ ").unwrap();
        assert_eq!(to_permutation(&t).values(), &[2, 1, 3]);
    }

    #[test]
    fn rejects_garbage() {
        for text in [
            "",
            "(",
            "(1,2)",
            "(1,2)*",
            "(1,3)+",
            "(2,1)+",
            "(1,2,3)+",
            "(1)+",
            "1 2",
            "(1,2)+3",
            "((1,2)+)+",
            ",",
            "x",
            ")",
        ] {
            assert!(SignedBinaryTree::parse(text).is_err(), "{text:?} accepted");
        }
    }
}
