//! A character trie mapping strings to values, with exact and
//! longest-prefix lookups.

#[derive(Debug, Clone)]
struct Node<V> {
    // Sorted by char so lookups can binary search.
    children: Vec<(char, usize)>,
    value: Option<V>,
}

impl<V> Node<V> {
    fn empty() -> Self {
        Node {
            children: Vec::new(),
            value: None,
        }
    }

    fn child(&self, c: char) -> Option<usize> {
        self.children
            .binary_search_by(|(k, _)| k.cmp(&c))
            .ok()
            .map(|i| self.children[i].1)
    }
}

#[derive(Debug, Clone)]
pub struct Trie<V> {
    nodes: Vec<Node<V>>,
    len: usize,
}

impl<V> Default for Trie<V> {
    fn default() -> Self {
        Trie {
            nodes: vec![Node::empty()],
            len: 0,
        }
    }
}

impl<V> Trie<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts `value` under `key`, returning the previous value if any.
    pub fn insert(&mut self, key: &str, value: V) -> Option<V> {
        let mut at = 0;
        for c in key.chars() {
            at = match self.nodes[at].children.binary_search_by(|(k, _)| k.cmp(&c)) {
                Ok(i) => self.nodes[at].children[i].1,
                Err(i) => {
                    let id = self.nodes.len();
                    self.nodes.push(Node::empty());
                    self.nodes[at].children.insert(i, (c, id));
                    id
                }
            };
        }
        let old = self.nodes[at].value.replace(value);
        if old.is_none() {
            self.len += 1;
        }
        old
    }

    pub fn get(&self, key: &str) -> Option<&V> {
        let mut at = 0;
        for c in key.chars() {
            at = self.nodes[at].child(c)?;
        }
        self.nodes[at].value.as_ref()
    }

    /// The value stored under the longest key that is a prefix of `text`
    /// (including `text` itself).
    pub fn longest_prefix(&self, text: &str) -> Option<&V> {
        let mut at = 0;
        let mut best = self.nodes[0].value.as_ref();
        for c in text.chars() {
            match self.nodes[at].child(c) {
                Some(next) => {
                    at = next;
                    if let Some(v) = self.nodes[at].value.as_ref() {
                        best = Some(v);
                    }
                }
                None => break,
            }
        }
        best
    }
}
