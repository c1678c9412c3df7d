#include "ixs/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <vector>

namespace ixs {

struct Expr::Node {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    double value = 0.0;
    std::function<double(double)> fn;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double x) const
    {
        switch (kind) {
        case Kind::Number: return value;
        case Kind::Var: return x;
        case Kind::Neg: return -lhs->eval(x);
        case Kind::Add: return lhs->eval(x) + rhs->eval(x);
        case Kind::Sub: return lhs->eval(x) - rhs->eval(x);
        case Kind::Mul: return lhs->eval(x) * rhs->eval(x);
        case Kind::Div: return lhs->eval(x) / rhs->eval(x);
        case Kind::Pow: {
            double b = lhs->eval(x), e = rhs->eval(x);
            if (e == 2.0) return b * b;
            return std::pow(b, e);
        }
        case Kind::Call: return fn(lhs->eval(x));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr)
{
    auto n = std::make_shared<Expr::Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr number(double v)
{
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Number;
    n->value = v;
    return n;
}

const std::map<std::string, std::function<double(double)>>& functions()
{
    static const std::map<std::string, std::function<double(double)>> f = {
        {"exp", [](double v) { return std::exp(v); }},   {"log", [](double v) { return std::log(v); }},
        {"cosh", [](double v) { return std::cosh(v); }}, {"sinh", [](double v) { return std::sinh(v); }},
        {"tanh", [](double v) { return std::tanh(v); }}, {"sqrt", [](double v) { return std::sqrt(v); }},
        {"cos", [](double v) { return std::cos(v); }},   {"sin", [](double v) { return std::sin(v); }},
        {"abs", [](double v) { return std::fabs(v); }},
    };
    return f;
}

class Parser {
public:
    Parser(const std::string& s, const std::map<std::string, double>& c) : s_(s), constants_(c) {}

    NodePtr parse()
    {
        NodePtr n = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ExprError("expression '" + s_ + "' at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr sum()
    {
        NodePtr n = product();
        for (;;) {
            if (eat('+'))
                n = make(Kind::Add, n, product());
            else if (eat('-'))
                n = make(Kind::Sub, n, product());
            else
                return n;
        }
    }

    NodePtr product()
    {
        NodePtr n = unary();
        for (;;) {
            if (eat('*'))
                n = make(Kind::Mul, n, unary());
            else if (eat('/'))
                n = make(Kind::Div, n, unary());
            else
                return n;
        }
    }

    NodePtr unary()
    {
        if (eat('-')) return make(Kind::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power()
    {
        NodePtr base = atom();
        if (eat('^')) return make(Kind::Pow, base, unary());
        return base;
    }

    NodePtr atom()
    {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr n = sum();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<size_t>(end - begin);
            return number(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name = s_.substr(start, pos_ - start);
            if (name == "x") return make(Kind::Var);
            if (name == "pi") return number(M_PI);
            if (name == "e") return number(M_E);
            auto k = constants_.find(name);
            if (k != constants_.end()) return number(k->second);
            auto f = functions().find(name);
            if (f != functions().end()) {
                if (!eat('(')) fail("expected '(' after " + name);
                NodePtr arg = sum();
                if (!eat(')')) fail("expected ')'");
                auto n = std::make_shared<Expr::Node>();
                n->kind = Kind::Call;
                n->fn = f->second;
                n->lhs = arg;
                return n;
            }
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    const std::map<std::string, double>& constants_;
    size_t pos_ = 0;
};

}

Expr Expr::parse(const std::string& text, const std::map<std::string, double>& constants)
{
    Expr e;
    e.text_ = text;
    e.root_ = Parser(text, constants).parse();
    return e;
}

double Expr::operator()(double x) const
{
    return root_->eval(x);
}

}
