#include <pxlap/expression.hpp>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace pxlap
{

struct Expression::Node
{
  enum class Kind
  {
    number,
    var_x,
    var_y,
    neg,
    add,
    sub,
    mul,
    div,
    pow,
    abs,
    sin,
    cos,
    exp,
    min,
    max
  };

  Kind kind;
  double value = 0.0;
  std::shared_ptr<Node const> lhs;
  std::shared_ptr<Node const> rhs;

  double eval(double x, double y) const
  {
    switch (kind)
    {
    case Kind::number: return value;
    case Kind::var_x: return x;
    case Kind::var_y: return y;
    case Kind::neg: return -lhs->eval(x, y);
    case Kind::add: return lhs->eval(x, y) + rhs->eval(x, y);
    case Kind::sub: return lhs->eval(x, y) - rhs->eval(x, y);
    case Kind::mul: return lhs->eval(x, y) * rhs->eval(x, y);
    case Kind::div: return lhs->eval(x, y) / rhs->eval(x, y);
    case Kind::pow: return std::pow(lhs->eval(x, y), rhs->eval(x, y));
    case Kind::abs: return std::abs(lhs->eval(x, y));
    case Kind::sin: return std::sin(lhs->eval(x, y));
    case Kind::cos: return std::cos(lhs->eval(x, y));
    case Kind::exp: return std::exp(lhs->eval(x, y));
    case Kind::min: return std::min(lhs->eval(x, y), rhs->eval(x, y));
    case Kind::max: return std::max(lhs->eval(x, y), rhs->eval(x, y));
    }
    return 0.0;
  }
};

namespace
{

using Node = Expression::Node;
using NodePtr = std::shared_ptr<Node const>;

NodePtr make(Node::Kind kind, NodePtr lhs = {}, NodePtr rhs = {}, double value = 0.0)
{
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  node->value = value;
  return node;
}

// Recursive descent:
//   sum     := product (('+'|'-') product)*
//   product := unary (('*'|'/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := atom ('^' unary)?
class Parser
{
public:
  explicit Parser(std::string_view text) : _text(text) {}

  NodePtr parse()
  {
    NodePtr root = sum();
    skip_space();
    if (_pos != _text.size())
      fail("unexpected '" + std::string(1, _text[_pos]) + "'");
    return root;
  }

  bool uses_y() const { return _uses_y; }

private:
  [[noreturn]] void fail(std::string const &what) const
  {
    throw ParseError("expression '" + std::string(_text) + "': " + what +
                     " at position " + std::to_string(_pos));
  }

  void skip_space()
  {
    while (_pos < _text.size() && std::isspace(static_cast<unsigned char>(_text[_pos])))
      ++_pos;
  }

  bool accept(char c)
  {
    skip_space();
    if (_pos < _text.size() && _text[_pos] == c)
    {
      ++_pos;
      return true;
    }
    return false;
  }

  void expect(char c)
  {
    if (!accept(c))
      fail(std::string("expected '") + c + "'");
  }

  NodePtr sum()
  {
    NodePtr lhs = product();
    for (;;)
    {
      if (accept('+'))
        lhs = make(Node::Kind::add, lhs, product());
      else if (accept('-'))
        lhs = make(Node::Kind::sub, lhs, product());
      else
        return lhs;
    }
  }

  NodePtr product()
  {
    NodePtr lhs = unary();
    for (;;)
    {
      if (accept('*'))
        lhs = make(Node::Kind::mul, lhs, unary());
      else if (accept('/'))
        lhs = make(Node::Kind::div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary()
  {
    if (accept('-'))
      return make(Node::Kind::neg, unary());
    if (accept('+'))
      return unary();
    return power();
  }

  NodePtr power()
  {
    NodePtr base = atom();
    if (accept('^'))
      return make(Node::Kind::pow, base, unary());
    return base;
  }

  NodePtr atom()
  {
    skip_space();
    if (_pos >= _text.size())
      fail("unexpected end of input");

    char const c = _text[_pos];
    if (accept('('))
    {
      NodePtr inner = sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (std::isalpha(static_cast<unsigned char>(c)))
      return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  NodePtr number()
  {
    std::string const rest(_text.substr(_pos));
    char *end = nullptr;
    double const value = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str())
      fail("malformed number");
    _pos += static_cast<std::size_t>(end - rest.c_str());
    return make(Node::Kind::number, {}, {}, value);
  }

  NodePtr identifier()
  {
    std::size_t const start = _pos;
    while (_pos < _text.size() && std::isalnum(static_cast<unsigned char>(_text[_pos])))
      ++_pos;
    std::string_view const name = _text.substr(start, _pos - start);

    if (name == "x")
      return make(Node::Kind::var_x);
    if (name == "y")
    {
      _uses_y = true;
      return make(Node::Kind::var_y);
    }
    if (name == "pi")
      return make(Node::Kind::number, {}, {}, std::numbers::pi);
    if (name == "e")
      return make(Node::Kind::number, {}, {}, std::numbers::e);

    struct Function
    {
      std::string_view name;
      Node::Kind kind;
      int arity;
    };
    static constexpr Function functions[] = {
        {"abs", Node::Kind::abs, 1}, {"sin", Node::Kind::sin, 1},
        {"cos", Node::Kind::cos, 1}, {"exp", Node::Kind::exp, 1},
        {"min", Node::Kind::min, 2}, {"max", Node::Kind::max, 2}};
    for (auto const &f : functions)
    {
      if (f.name != name)
        continue;
      expect('(');
      NodePtr first = sum();
      NodePtr second;
      if (f.arity == 2)
      {
        expect(',');
        second = sum();
      }
      expect(')');
      return make(f.kind, first, second);
    }
    _pos = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view _text;
  std::size_t _pos = 0;
  bool _uses_y = false;
};

} // namespace

Expression::Expression(std::string text, std::shared_ptr<Node const> root, bool uses_y)
    : _text(std::move(text)), _root(std::move(root)), _uses_y(uses_y)
{
}

Expression Expression::parse(std::string_view text)
{
  Parser parser(text);
  auto root = parser.parse();
  return Expression(std::string(text), std::move(root), parser.uses_y());
}

double Expression::operator()(double x, double y) const { return _root->eval(x, y); }

} // namespace pxlap
