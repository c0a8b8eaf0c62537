// Generated by tools/gen_mms_source.py; do not edit.
#include <cmath>

#include "magma/problems.hpp"

namespace magma {

Vec2 mms_source_value(double x, double z, double alpha, double k_star, double k_sup) {
  const double t0 = pow(M_PI, 2);
  const double t1 = 1.0/tanh(5);
  const double t2 = -k_star + k_sup;
  const double t3 = M_PI*x;
  const double t4 = 4*t3;
  const double t5 = cos(t4);
  const double t6 = 2*M_PI;
  const double t7 = t6*z;
  const double t8 = cos(t7);
  const double t9 = tanh(10*x - 5);
  const double t10 = pow(t9, 2);
  const double t11 = 10 - 10*t10;
  const double t12 = tanh(10*z - 5);
  const double t13 = pow(t12, 2);
  const double t14 = 10 - 10*t13;
  const double t15 = t1*t2;
  const double t16 = t14*t15;
  const double t17 = sin(t4);
  const double t18 = sin(t7);
  const double t19 = t0*t18;
  const double t20 = t17*t19;
  const double t21 = t16*t20;
  const double t22 = t17*t8;
  const double t23 = pow(M_PI, 3)*((1.0/2.0)*k_star + (1.0/2.0)*k_sup + (1.0/4.0)*t15*(t12 + t9));
  const double t24 = M_PI*t22;
  const double t25 = t15*t24;
  const double t26 = t9*(20 - 20*t10);
  const double t27 = 80*t22*t23 + 10*t25*t26;
  const double t28 = t11*t15;
  const double t29 = t0*t8;
  const double t30 = t29*t5;
  const double t31 = 5*t12*(20 - 20*t13);
  const double t32 = t20*t28;
  const double t33 = t18*t5;
  const double t34 = M_PI*t15*t33;
  const double t35 = 40*t23*t33 + t31*t34;
  return {-alpha*(9*t0*t1*t11*t2*t5*t8 - 2*t21 - t27) + (5.0/2.0)*t19*sin(t3) + 3*t21 + 4*t24 + t25*t31 + t27 - 17.0/2.0*t28*t30, -alpha*(6*t0*t1*t14*t2*t5*t8 - 2*t32 - t35) - 4*t16*t30 + (5.0/2.0)*t26*t34 + (5.0/4.0)*t29*cos(t3) + 3*t32 + t33*t6 + t35};
}

}  // namespace magma
