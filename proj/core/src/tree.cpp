#include "tribound/tree.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "tribound/errors.hpp"

namespace tribound {

std::uint32_t IneqTree::add_node(NodeKind kind, u64 cls, ExponentShift shift, std::int32_t parent) {
  const auto id = static_cast<std::uint32_t>(nodes.size());
  nodes.push_back(TreeNode{kind, cls, shift, parent, {}});
  if (parent >= 0) nodes[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

void IneqTree::unlink_child(std::uint32_t parent, std::uint32_t child) {
  auto& kids = nodes[parent].children;
  auto it = std::find(kids.begin(), kids.end(), child);
  if (it == kids.end()) throw std::logic_error("unlink_child: not a child");
  kids.erase(it);
  nodes[child].parent = -1;
}

std::vector<std::uint32_t> IneqTree::bfs_order() const {
  std::vector<std::uint32_t> order;
  if (nodes.empty()) return order;
  order.push_back(0);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto c : nodes[order[i]].children) order.push_back(c);
  return order;
}

std::vector<std::uint32_t> IneqTree::leaves_preorder() const {
  std::vector<std::uint32_t> leaves, stack{0};
  if (nodes.empty()) return leaves;
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    if (is_leaf(i)) leaves.push_back(i);
    const auto& kids = nodes[i].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return leaves;
}

ExpansionStats stats(const IneqTree& tree) {
  ExpansionStats s;
  // (node, m-count along path); explicit stack since trees can be deep.
  std::vector<std::pair<std::uint32_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, depth] = stack.back();
    stack.pop_back();
    const auto& n = tree.nodes[i];
    int d = depth + (n.kind == NodeKind::M ? 1 : 0);
    if (tree.is_leaf(i)) {
      ++s.literals;
      s.depth = std::max(s.depth, d);
    }
    for (auto c : n.children) stack.push_back({c, d});
  }
  return s;
}

bool same_tree(const IneqTree& a, const IneqTree& b) {
  if (a.k != b.k) return false;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    const auto& x = a.nodes[i];
    const auto& y = b.nodes[j];
    if (x.kind != y.kind || x.cls != y.cls || !(x.shift == y.shift)) return false;
    if (x.children.size() != y.children.size()) return false;
    for (std::size_t c = 0; c < x.children.size(); ++c)
      stack.push_back({x.children[c], y.children[c]});
  }
  return true;
}

namespace {

void write_node(const IneqTree& t, std::uint32_t i, std::ostringstream& out) {
  const auto& n = t.nodes[i];
  out << '(' << (n.kind == NodeKind::P ? 'p' : 'm') << ' ' << n.cls << ' '
      << n.shift.p << ' ' << n.shift.q;
  for (auto c : n.children) {
    out << ' ';
    write_node(t, c, out);
  }
  out << ')';
}

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c)
      throw MalformedTree("parse_tree: expected '" + std::string(1, c) + "'");
    ++pos;
  }
  std::string token() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
           s[pos] != '(' && s[pos] != ')')
      ++pos;
    if (start == pos) throw MalformedTree("parse_tree: expected token");
    return s.substr(start, pos - start);
  }
  std::int64_t integer() {
    const std::string tok = token();
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw MalformedTree("parse_tree: expected integer, got '" + tok + "'");
    }
    if (used != tok.size()) throw MalformedTree("parse_tree: expected integer, got '" + tok + "'");
    return v;
  }

  std::uint32_t node(IneqTree& t, std::int32_t parent) {
    expect('(');
    const std::string kind = token();
    if (kind != "p" && kind != "m") throw MalformedTree("parse_tree: bad node kind");
    const u64 cls = static_cast<u64>(integer());
    ExponentShift shift{integer(), integer()};
    const auto id = t.add_node(kind == "p" ? NodeKind::P : NodeKind::M, cls, shift, parent);
    while (true) {
      skip_ws();
      if (pos >= s.size()) throw MalformedTree("parse_tree: unexpected end");
      if (s[pos] == ')') {
        ++pos;
        return id;
      }
      node(t, static_cast<std::int32_t>(id));
    }
  }
};

}  // namespace

std::string serialize(const IneqTree& tree) {
  std::ostringstream out;
  out << "(tree " << tree.k << ' ';
  write_node(tree, 0, out);
  out << ')';
  return out.str();
}

IneqTree parse_tree(const std::string& text) {
  Parser p{text};
  p.expect('(');
  if (p.token() != "tree") throw MalformedTree("parse_tree: expected (tree ...)");
  IneqTree t;
  t.k = static_cast<int>(p.integer());
  p.node(t, -1);
  p.expect(')');
  p.skip_ws();
  if (p.pos != text.size()) throw MalformedTree("parse_tree: trailing input");
  if (t.nodes.empty() || t.nodes[0].kind != NodeKind::P)
    throw MalformedTree("parse_tree: root must be a p-node");
  return t;
}

}  // namespace tribound
