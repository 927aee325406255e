#ifndef HPKM_CAPI_H
#define HPKM_CAPI_H

/* C interface to the hybrid 5-axis machine toolkit. All angles are radians,
 * lengths meters, times seconds. Pose arrays are ordered (alpha, beta, x, y,
 * z) and joint arrays (theta1, theta2, rho1, rho2, rho3). Functions return
 * HPKM_OK or an error status; hpkm_last_error() describes the most recent
 * failure on the calling thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hpkm_status {
  HPKM_OK = 0,
  HPKM_ERR_INVALID = 1,      /* bad argument or parameter value */
  HPKM_ERR_CONFIG = 2,       /* config syntax error or unknown key */
  HPKM_ERR_NO_SOLUTION = 3,  /* ik discriminant negative */
  HPKM_ERR_SINGULAR = 4,     /* singular configuration */
  HPKM_ERR_JOINT_LIMIT = 5,  /* prismatic extension out of range */
  HPKM_ERR_TILT = 6,         /* tilt limit exceeded */
  HPKM_ERR_WORKSPACE = 7,    /* planned motion leaves the workspace */
  HPKM_ERR_GCODE = 8,        /* unsupported or malformed G-code */
  HPKM_ERR_IO = 9,           /* file read/write failure */
  HPKM_ERR_SHUTDOWN = 10     /* simulation tripped the error threshold */
} hpkm_status;

typedef struct hpkm_params hpkm_params;
typedef struct hpkm_plan hpkm_plan;
typedef struct hpkm_trace hpkm_trace;

const char* hpkm_version(void);
const char* hpkm_status_name(hpkm_status status);
/* Message for the last failing call on this thread; empty string if none. */
const char* hpkm_last_error(void);

/* ---------------- machine parameters ---------------- */

hpkm_status hpkm_params_create(hpkm_params** out);            /* defaults */
hpkm_status hpkm_params_load(const char* path, hpkm_params** out);
hpkm_status hpkm_params_parse(const char* text, hpkm_params** out);
void hpkm_params_free(hpkm_params* params);
/* Keys as in the config format, e.g. "l1", "k_vt", "tilt_limit_deg". */
hpkm_status hpkm_params_get(const hpkm_params* params, const char* key,
                            double* out);
hpkm_status hpkm_params_home(const hpkm_params* params, double pose[5]);

/* ---------------- kinematics ---------------- */

/* mode: three entries of +1/-1 selecting the ik branch per leg; NULL for
 * (+1, +1, +1). */
hpkm_status hpkm_ik(const hpkm_params* params, const double pose[5],
                    const int* mode, double joints[5]);
/* assembly: +1 or -1 quadratic branch; 0 for the default (-1). */
hpkm_status hpkm_fk(const hpkm_params* params, const double joints[5],
                    int assembly, double pose[5]);
/* Row-major 5x5: q_dot = J * (alpha_dot, beta_dot, x_dot, y_dot, z_dot). */
hpkm_status hpkm_inv_jacobian(const hpkm_params* params, const double pose[5],
                              double jac[25]);
hpkm_status hpkm_inv_jacobian_dot(const hpkm_params* params, const double pose[5],
                                  const double twist[5], double jac_dot[25]);
hpkm_status hpkm_wrist_center(const hpkm_params* params, const double pose[5],
                              double center[3]);

/* inside: 1/0. reason, when non-NULL, receives a short token ("ok", "tilt",
 * "unreachable", "joint_limit"). */
hpkm_status hpkm_workspace_contains(const hpkm_params* params,
                                    const double pose[5], const int* mode,
                                    int* inside, const char** reason);

typedef struct hpkm_cube_report {
  size_t total;
  size_t passed;
  double first_failure[3]; /* wrist-center coordinates, valid if passed < total */
  char first_reason[32];
} hpkm_cube_report;

/* Grid of samples_per_edge^3 wrist-center positions over the axis-aligned
 * cube; each is checked as a pose with zero tilt. */
hpkm_status hpkm_workspace_cube_check(const hpkm_params* params,
                                      const double center[3], double edge,
                                      int samples_per_edge,
                                      hpkm_cube_report* report);

/* ---------------- trajectory planning ---------------- */

typedef struct hpkm_plan_options {
  double speed_ratio;   /* (0, 1] */
  double sample_rate;   /* Hz */
  int safety_cap;       /* engage safety_speed_ratio */
} hpkm_plan_options;

void hpkm_plan_options_init(hpkm_plan_options* opts);

hpkm_status hpkm_plan_line(const hpkm_params* params, const double* poses,
                           size_t n_poses, const hpkm_plan_options* opts,
                           hpkm_plan** out);

typedef struct hpkm_circle {
  double center[3];
  double radius;
  double eta_min, eta_max;
  double alpha1, beta1;
  double a2, b2;    /* tilt at arc start */
  double a3, b3;    /* tilt at arc end */
} hpkm_circle;

hpkm_status hpkm_plan_circle(const hpkm_params* params, const hpkm_circle* circle,
                             const double entry[5], const double exit[5],
                             const hpkm_plan_options* opts, hpkm_plan** out);

hpkm_status hpkm_plan_gcode(const hpkm_params* params, const char* text,
                            double corner_radius_cap,
                            const hpkm_plan_options* opts, hpkm_plan** out);

void hpkm_plan_free(hpkm_plan* plan);

size_t hpkm_plan_sample_count(const hpkm_plan* plan);
/* Any output pointer may be NULL. */
hpkm_status hpkm_plan_sample(const hpkm_plan* plan, size_t index, double* t,
                             double pose[5], double vel[5], double acc[5],
                             double joints[5], double joints_dot[5],
                             double joints_ddot[5]);

typedef struct hpkm_segment_info {
  char label[32];
  double t_start;
  double tf_initial;
  double tf_final;
  double multiplier;
} hpkm_segment_info;

size_t hpkm_plan_segment_count(const hpkm_plan* plan);
hpkm_status hpkm_plan_segment(const hpkm_plan* plan, size_t index,
                              hpkm_segment_info* info);

typedef struct hpkm_corner_info {
  double vertex[3];
  double turn_angle;
  double radius;
  double trim;
  double speed;
  int line;
} hpkm_corner_info;

/* Corner blends of a G-code plan; zero count for other plans. */
size_t hpkm_plan_corner_count(const hpkm_plan* plan);
hpkm_status hpkm_plan_corner(const hpkm_plan* plan, size_t index,
                             hpkm_corner_info* info);

typedef struct hpkm_plan_summary {
  double duration;
  double peak_cart_vel_t;  /* m/s   */
  double peak_cart_vel_r;  /* rad/s */
  double peak_cart_acc_t;  /* m/s^2 */
  double peak_cart_acc_r;  /* rad/s^2 */
  double peak_joint_vel_ratio;
  double peak_joint_acc_ratio;
} hpkm_plan_summary;

hpkm_status hpkm_plan_summary_get(const hpkm_plan* plan, const hpkm_params* params,
                                  hpkm_plan_summary* summary);

hpkm_status hpkm_plan_write_csv(const hpkm_plan* plan, const char* path);
hpkm_status hpkm_plan_read_csv(const char* path, hpkm_plan** out);

/* ---------------- control simulation ---------------- */

typedef struct hpkm_sim_options {
  double control_rate;
  double sensing_rate;
  double velocity_cutoff;
  int use_velocity_filter;
  double duration;          /* 0 = plan duration */
  int disturbance_axis;     /* -1 disables */
  double disturbance_force;
  double disturbance_start;
  int offset_axis;          /* -1 disables */
  double offset_value;
} hpkm_sim_options;

void hpkm_sim_options_init(hpkm_sim_options* opts);

hpkm_status hpkm_sim_run(const hpkm_params* params, const hpkm_plan* plan,
                         const hpkm_sim_options* opts, hpkm_trace** out);
void hpkm_trace_free(hpkm_trace* trace);

size_t hpkm_trace_step_count(const hpkm_trace* trace);
hpkm_status hpkm_trace_step(const hpkm_trace* trace, size_t index, double* t,
                            double q_des[5], double q_act[5], double qd_des[5],
                            double qd_est[5], double error[5], double u[5],
                            double* cycle_seconds);

typedef struct hpkm_sim_summary {
  int shutdown;
  double shutdown_time;
  double max_error[5];
  double max_u[5];
  double median_cycle_seconds;
  double max_cycle_seconds;
} hpkm_sim_summary;

hpkm_status hpkm_trace_summary(const hpkm_trace* trace, hpkm_sim_summary* summary);
hpkm_status hpkm_trace_write_csv(const hpkm_trace* trace, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* HPKM_CAPI_H */
