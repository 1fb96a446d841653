#ifndef PXLAP_EXPRESSION_HPP
#define PXLAP_EXPRESSION_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pxlap
{

class ParseError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Closed-form expression over the coordinates x and y.
///
/// Grammar: binary + - * / ^ (right associative, binds tighter than unary
/// minus), parentheses, numeric literals, the constants pi and e, and the
/// functions abs sin cos exp (one argument) and min max (two arguments).
class Expression
{
public:
  struct Node;

  static Expression parse(std::string_view text);

  double operator()(double x, double y = 0.0) const;

  std::string const &text() const { return _text; }

  /// True when the expression mentions y.
  bool uses_y() const { return _uses_y; }

private:
  Expression(std::string text, std::shared_ptr<Node const> root, bool uses_y);

  std::string _text;
  std::shared_ptr<Node const> _root;
  bool _uses_y = false;
};

} // namespace pxlap

#endif
