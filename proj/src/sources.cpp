#include "aoii/sources.hpp"

#include "aoii/errors.hpp"

namespace aoii::bench {

GeneratorMatrix q1() {
    Mat q = Mat::Constant(5, 5, 0.25);
    q.diagonal().setConstant(-1.0);
    return validate_generator(q);
}

GeneratorMatrix q2() {
    Mat q(3, 3);
    q << -1.0, 0.7, 0.3, //
        0.2, -0.6, 0.4,  //
        0.1, 0.7, -0.8;
    return validate_generator(q);
}

GeneratorMatrix q3() {
    Mat q(2, 2);
    q << -0.5, 0.5, //
        0.75, -0.75;
    return validate_generator(q);
}

GeneratorMatrix by_name(const std::string &name) {
    if (name == "q1")
        return q1();
    if (name == "q2")
        return q2();
    if (name == "q3")
        return q3();
    throw ConfigError("unknown benchmark source '" + name +
                      "' (expected q1, q2, or q3)");
}

} // namespace aoii::bench
