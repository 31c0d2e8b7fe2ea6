#ifndef SIRW_FINAL_SIZE_HPP
#define SIRW_FINAL_SIZE_HPP

namespace sirw {

// Herd immunity threshold S* = min{1, 1/r}.
double herd_immunity_threshold(double r);

struct FinalSizeQuery {
    double r = 0.0;   // reproduction number, > 0
    double s0 = 0.0;  // initial susceptible fraction
    double i0 = 0.0;  // initial infected fraction

    void validate_or_throw() const;
};

// Limiting susceptible fraction S_inf(r, s0, i0) = -W0(-r s0 e^{-r (s0+i0)}) / r.
//
// Always evaluated in the (s0, i0) form, which stays correct when the removed
// fraction at the query time is nonzero. For i0 = 0 with s0 > S* the formula
// returns the nontrivial root below S*, not s0: that equilibrium is unstable
// and any infection reseeds the decline, so callers that care about the
// literal rest state must special-case it.
double final_size(const FinalSizeQuery& q);
double final_size(double r, double s0, double i0);

struct FinalSizeOptimum {
    double s_op = 0.0;      // maximizing susceptible fraction (= S*)
    double i_op = 0.0;      // maximizing infected fraction (= delta)
    double s_inf_op = 0.0;  // maximal final size over the constrained set
};

// Maximum of S_inf over {s in [0,1], i in [delta,1]}: attained at (S*, delta)
// with value -W0(-r S* e^{-r (S*+delta)}) / r; equals S* at delta = 0.
FinalSizeOptimum final_size_optimum(double r, double delta);

} // namespace sirw

#endif
