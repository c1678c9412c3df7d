#pragma once

#include <string>

#include "ixs/heat.hpp"

namespace ixs {

enum class Endpoint { A, B };
enum class BoundaryClass { Regular, Exit, Entrance, Natural, Undecided };
enum class Finiteness { Finite, Diverged, Undecided };

std::string to_string(BoundaryClass c);

struct ImproperValue {
    Finiteness status = Finiteness::Undecided;
    double value = 0.0;
    double threshold = 1e8;
    int refinements = 0;

    std::string describe() const;
};

struct FellerOptions {
    double threshold = 1e8;
    double rel_tol = 1e-6;
    int max_refinements = 60;
    double min_offset = 1e-13;
};

struct BoundaryReport {
    Endpoint endpoint = Endpoint::A;
    double location = 0.0;
    double anchor = 0.0;
    BoundaryClass classification = BoundaryClass::Undecided;
    ImproperValue scale;
    ImproperValue I_value;
    ImproperValue J_value;
    ImproperValue r_mass;
    bool r_mass_finite = false;
    std::string condition;
};

ImproperValue improper_integral(const std::function<double(double)>& f, double endpoint, double anchor,
                                const FellerOptions& opt = {});

BoundaryReport classify(const SLOperator& op, Endpoint endpoint, double anchor, const FellerOptions& opt = {});

std::string boundary_condition(const BoundaryReport& report, const std::string& p_text = "p(x)");

SLOperator operator_from_strings(const std::string& p, const std::string& q, const std::string& r, double a,
                                 double b);

SLOperator builtin_operator(const std::string& spec);

}
