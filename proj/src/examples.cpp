#include "theicp/examples.hpp"

#include <stdexcept>

namespace theicp {

namespace {

Vector vec(std::initializer_list<double> vals) {
    Vector v(static_cast<Eigen::Index>(vals.size()));
    Eigen::Index i = 0;
    for (double x : vals) v[i++] = x;
    return v;
}

const std::vector<double> ex1_a = {
         0.2296, 0.687, 0.7421, 0.8943, 0.687, 0.9403, 0.1194, 0.5919,
         0.7421, 0.1194, 0.9325, 0.7779, 0.8943, 0.5919, 0.7779, 0.329};

const std::vector<double> ex1_b = {
         0.2235, 0.3014, 0.7879, 0.5394, 0.3014, 0.4026, 0.5329, 0.5453,
         0.7879, 0.5329, 0.8272, 0.5375, 0.5394, 0.5453, 0.5375, 0.5994};

const std::vector<double> ex2_a = {
         2, 2, 1.33333333333, 1.33333333333, 2, 1.33333333333, 0.666666666667, 1.33333333333,
         1.33333333333, 0.666666666667, 2.66666666667, 0, 1.33333333333, 1.33333333333, 0, 2,
         2, 1.33333333333, 0.666666666667, 1.33333333333, 1.33333333333, 12, -0.666666666667, 3.33333333333,
         0.666666666667, -0.666666666667, 5.33333333333, -2, 1.33333333333, 3.33333333333, -2, 4.66666666667,
         1.33333333333, 0.666666666667, 2.66666666667, 0, 0.666666666667, -0.666666666667, 5.33333333333, -2,
         2.66666666667, 5.33333333333, 6, 0.666666666667, 0, -2, 0.666666666667, 0,
         1.33333333333, 1.33333333333, 0, 2, 1.33333333333, 3.33333333333, -2, 4.66666666667,
         0, -2, 0.666666666667, 0, 2, 4.66666666667, 0, 4};

const std::vector<double> ex2_b = {
         1.6557, 1.6551, 1.9172, 1.5383, 1.3572, 1.5612, 1.3331, 1.5514,
         1.7523, 1.4351, 1.644, 1.4477, 1.6055, 1.6946, 1.6613, 1.3513,
         1.3572, 1.5612, 1.3331, 1.5514, 1.7577, 1.3404, 1.5678, 1.9619,
         1.4572, 1.4202, 1.4275, 1.4367, 1.2192, 1.5916, 1.2617, 1.7875,
         1.7523, 1.4351, 1.644, 1.4477, 1.4572, 1.4202, 1.4275, 1.4367,
         1.706, 1.506, 1.934, 1.0844, 1.0645, 1.6231, 1.0709, 1.4156,
         1.6055, 1.6946, 1.6613, 1.3513, 1.2192, 1.5916, 1.2617, 1.7875,
         1.0645, 1.6231, 1.0709, 1.4156, 1.8235, 1.1386, 1.3371, 1.9106};

const std::vector<double> ex3_a = {
         0.6229, 0.7563, 0.0657, 0.7563, 0.7689, 0.8077, 0.0657, 0.8077,
         0.7581, 0.2644, 0.5878, 0.4918, 0.5878, 0.3941, 0.491, 0.4918,
         0.491, 0.7205, 0.3567, 0.5406, 0.9312, 0.5406, 0.6034, 0.2953,
         0.9312, 0.2953, 0.9044, 0.2644, 0.5878, 0.4918, 0.5878, 0.3941,
         0.491, 0.4918, 0.491, 0.7205, 0.0475, 0.1379, 0.7788, 0.1379,
         0.3577, 0.5054, 0.7788, 0.5054, 0.0782, 0.7367, 0.0715, 0.9045,
         0.0715, 0.3465, 0.5556, 0.9045, 0.5556, 0.724, 0.3567, 0.5406,
         0.9312, 0.5406, 0.6034, 0.2953, 0.9312, 0.2953, 0.9044, 0.7367,
         0.0715, 0.9045, 0.0715, 0.3465, 0.5556, 0.9045, 0.5556, 0.724,
         0.1259, 0.3725, 0.8711, 0.3725, 0.4516, 0.9608, 0.8711, 0.9608,
         0.3492};

const std::vector<double> ex3_b = {
         0.6954, 0.673, 0.7585, 0.673, 0.3608, 0.4632, 0.7585, 0.4632,
         0.82, 0.4018, 0.5351, 0.6433, 0.5351, 0.3914, 0.2043, 0.6433,
         0.2043, 0.5914, 0.1406, 0.4473, 0.2306, 0.4473, 0.523, 0.2823,
         0.2306, 0.2823, 0.4983, 0.4018, 0.5351, 0.6433, 0.5351, 0.3914,
         0.2043, 0.6433, 0.2043, 0.5914, 0.9957, 0.2853, 0.8986, 0.2853,
         0.6822, 0.7282, 0.8986, 0.7282, 0.0762, 0.0483, 0.3071, 0.3427,
         0.3071, 0.5516, 0.74, 0.3427, 0.74, 0.2854, 0.1406, 0.4473,
         0.2306, 0.4473, 0.523, 0.2823, 0.2306, 0.2823, 0.4983, 0.0483,
         0.3071, 0.3427, 0.3071, 0.5516, 0.74, 0.3427, 0.74, 0.2854,
         0.0988, 0.9665, 0.539, 0.9665, 0.7091, 0.9369, 0.539, 0.9369,
         0.1266};


Tensor neg_identity(int m, int n) {
    Tensor id = identity_tensor(m, n);
    std::vector<double> data = id.data();
    for (double& v : data) v = -v;
    return Tensor::raw(m, n, std::move(data));
}

BundledExample make_example(int id) {
    BundledExample ex;
    ex.id = id;

    if (id == 1) {

        ex.problem = ProblemTriple::make(Tensor::raw(2, 4, ex1_a),
                                         Tensor::raw(2, 4, ex1_b),
                                         neg_identity(2, 4));

        ex.gamma1 = 200;
        ex.gamma2 = 10;

        ex.rows.push_back(ReferenceRow{vec({0.3829, 0.0846, 0.7339, 0.332}), 0.683,
                                       vec({0, 0, 0.5701, 0}),
                                       vec({0.5042, 0.2393, 0, 0.4162}), 326});

        ex.rows.push_back(ReferenceRow{vec({0.8397, 0.3717, 0.8282, 0.1765}), 1.6563,
                                       vec({1.2973, 0, 0, 0}),
                                       vec({0, 3.0929, 4.3342, 4.3419}), 696});

        ex.rows.push_back(ReferenceRow{vec({0.1295, 0.8799, 0.0441, 0.6867}), 0.8392,
                                       vec({0, 0.6509, 0, 0}),
                                       vec({0.4795, 0, 0.3458, 0.5691}), 464});

        ex.rows.push_back(ReferenceRow{vec({0.7338, 0.4372, 0.3798, 0.9797}), 1.0561,
                                       vec({0, 0, 0, 0.9032}),
                                       vec({1.4153, 1.1163, 1.2963, 0}), 576});

    }

    if (id == 2) {

        ex.problem = ProblemTriple::make(Tensor::raw(3, 4, ex2_a),
                                         Tensor::raw(3, 4, ex2_b),
                                         neg_identity(3, 4));

        ex.gamma1 = 1000;
        ex.gamma2 = 50;

        ex.rows.push_back(ReferenceRow{vec({0.403, 0.51, 0.4956, 0.6514}), 0.3947,
                                       vec({0, 0, 0, 0.435}),
                                       vec({0.1242, 0.1878, 0.1057, 0}), 1459});

        ex.rows.push_back(ReferenceRow{vec({0.7437, 0.302, 0.0896, 0.826}), 0.4747,
                                       vec({0.531, 0, 0, 0}),
                                       vec({0, 0.242, 0.2748, 0.2551}), 1580});

        ex.rows.push_back(ReferenceRow{vec({0.3896, 0.7753, 0.1794, 0.1094}), 0.3528,
                                       vec({0, 0.3497, 0, 0}),
                                       vec({0.0745, 0, 0.0577, 0.0866}), 944});

        ex.rows.push_back(ReferenceRow{vec({0.0369, 0.5447, 0.9976, 0.511}), 0.3655,
                                       vec({0, 0, 0.3948, 0}),
                                       vec({0.114, 0.1219, 0, 0.0661}), 1481});

    }

    if (id == 3) {

        ex.problem = ProblemTriple::make(Tensor::raw(4, 3, ex3_a),
                                         Tensor::raw(4, 3, ex3_b),
                                         neg_identity(4, 3));

        ex.gamma1 = 1000;
        ex.gamma2 = 50;

        ex.rows.push_back(ReferenceRow{vec({0.7919, 0.4522, 0.8492}), 1.2462,
                                       vec({0, 0, 1.1968}),
                                       vec({4.8039, 3.6034, 0}), 743});

        ex.rows.push_back(ReferenceRow{vec({0.5233, 0.4299, 0.2072}), 0.886,
                                       vec({0.9628, 0, 0}),
                                       vec({0, 0.4632, 0.3074}), 1234});

        ex.rows.push_back(ReferenceRow{vec({0.1203, 0.6255, 0.3466}), 0.9807,
                                       vec({0, 1.0863, 0}),
                                       vec({0.9594, 0, 1.1045}), 897});

    }

    return ex;
}

}  // namespace

const BundledExample& bundled_example(int id) {
    if (id < 1 || id > 3) throw std::invalid_argument("bundled examples are numbered 1..3");
    static const BundledExample cache[3] = {make_example(1), make_example(2), make_example(3)};
    return cache[id - 1];
}

}  // namespace theicp
