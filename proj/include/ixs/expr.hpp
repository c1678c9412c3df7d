#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace ixs {

struct ExprError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class Expr {
public:
    struct Node;

    static Expr parse(const std::string& text, const std::map<std::string, double>& constants = {});

    double operator()(double x) const;
    const std::string& text() const { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}
