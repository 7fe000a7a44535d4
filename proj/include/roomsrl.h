/* C interface to the rooms gridworld, its trained meta-controllers, and
 * the experiment harness. All functions returning rrl_status leave a
 * thread-local message readable via rrl_last_error() on failure. Handles
 * are single-threaded; distinct handles may be used concurrently. */

#ifndef ROOMSRL_H
#define ROOMSRL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RRL_API __declspec(dllexport)
#else
#define RRL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rrl_status {
    RRL_OK = 0,
    RRL_ERR_INVALID_ARGUMENT = 1,
    RRL_ERR_CONFIG = 2,
    RRL_ERR_IO = 3,
    RRL_ERR_NUMERIC = 4,
    RRL_ERR_INTERNAL = 5
} rrl_status;

RRL_API const char* rrl_version(void);
RRL_API const char* rrl_status_name(rrl_status status);

/* Message from the most recent failing call on this thread; empty string
 * when no failure has occurred. The pointer stays valid until the next
 * failing call on the same thread. */
RRL_API const char* rrl_last_error(void);

/* ------------------------------------------------------------------ */
/* Room layouts                                                        */

/* Number of distinct valid layouts (44 height compositions x 24 color
 * orders = 1056). */
RRL_API size_t rrl_layout_count(void);

/* Heights (rows per room, top to bottom) and color indices of layout
 * `index` in the canonical enumeration order. */
RRL_API rrl_status rrl_layout_get(size_t index, int heights[4], int colors[4]);

/* "red", "green", "blue" or "yellow" for color index 0..3. */
RRL_API const char* rrl_color_name(int color);

/* ------------------------------------------------------------------ */
/* Environment                                                         */

typedef struct rrl_env rrl_env;

#define RRL_IMAGE_ROWS 10
#define RRL_IMAGE_COLS 5
#define RRL_IMAGE_CHANNELS 5
#define RRL_IMAGE_SIZE (RRL_IMAGE_ROWS * RRL_IMAGE_COLS * RRL_IMAGE_CHANNELS)

/* dynamic_layout != 0 resamples the room arrangement on every reset.
 * timeout <= 0 selects the default of 100 steps. */
RRL_API rrl_status rrl_env_create(int dynamic_layout, uint64_t seed, int timeout,
                                  rrl_env** out);
RRL_API void rrl_env_destroy(rrl_env* env);

/* Starts a fresh episode: agent at the top-left corner, target set to the
 * bottom room's color. */
RRL_API rrl_status rrl_env_reset(rrl_env* env);

/* Moves the agent by delta_row in {-1, 0, +1}. */
RRL_API rrl_status rrl_env_step(rrl_env* env, int delta_row, double* reward, int* done,
                                int* success);

/* Row-major image of RRL_IMAGE_SIZE doubles (channels 0-3 one-hot room
 * color, channel 4 agent presence) and a one-hot instruction of 4
 * doubles. Either pointer may be NULL to skip that output. */
RRL_API rrl_status rrl_env_observe(const rrl_env* env, double* image, double* instruction);

RRL_API rrl_status rrl_env_agent_row(const rrl_env* env, int* row);

/* ------------------------------------------------------------------ */
/* Experiments                                                         */

typedef struct rrl_experiment rrl_experiment;

/* Resolves an experiment spec from an optional key=value config file
 * (NULL or "" for none) plus ordered key/value overrides. Valid keys:
 * experiment, episodes, seed, lr, batch, timeout, grad_clip,
 * baseline_source, out. */
RRL_API rrl_status rrl_experiment_create(const char* config_path,
                                         const char* const* override_keys,
                                         const char* const* override_values,
                                         size_t override_count, rrl_experiment** out);
RRL_API void rrl_experiment_destroy(rrl_experiment* experiment);

/* Writes the resolved spec as key=value lines into `buffer` (always
 * NUL-terminated; truncated if buffer_size is too small). */
RRL_API rrl_status rrl_experiment_describe(const rrl_experiment* experiment, char* buffer,
                                           size_t buffer_size);

typedef void (*rrl_episode_callback)(void* user, int episode, int length,
                                     double episode_return, int success, double baseline);

/* Trains the experiment, streaming one CSV row per episode to the spec's
 * output path. `callback` (optional) also sees every episode. */
RRL_API rrl_status rrl_experiment_run(rrl_experiment* experiment,
                                      rrl_episode_callback callback, void* user);

/* Episode-length statistics over the final 100 episodes of the last
 * completed run. Any output pointer may be NULL. */
RRL_API rrl_status rrl_experiment_summary(const rrl_experiment* experiment, int* episodes,
                                          double* mean_length, double* length_variance);

/* Saves the trained parameters of the last completed run. */
RRL_API rrl_status rrl_experiment_save_params(const rrl_experiment* experiment,
                                              const char* path);

/* ------------------------------------------------------------------ */
/* Run-CSV summaries                                                   */

typedef struct rrl_summary rrl_summary;

/* Buckets a run CSV into groups of `bucket` consecutive episodes. */
RRL_API rrl_status rrl_summarize(const char* csv_path, int bucket, rrl_summary** out);
RRL_API void rrl_summary_destroy(rrl_summary* summary);

RRL_API size_t rrl_summary_bucket_count(const rrl_summary* summary);
RRL_API rrl_status rrl_summary_bucket(const rrl_summary* summary, size_t index,
                                      int* start_episode, int* count, double* mean_length,
                                      double* variance_length);

/* ------------------------------------------------------------------ */
/* Gradient verification                                               */

/* Runs the finite-difference suite (every layer plus both policy
 * networks). Returns RRL_OK only if every case passes `tolerance`.
 * seeds <= 0, epsilon <= 0, or tolerance <= 0 select the defaults
 * (20, 1e-5, 1e-4). `report` (optional) receives one line per case. */
RRL_API rrl_status rrl_gradcheck(int seeds, double epsilon, double tolerance,
                                 double* max_rel_error, char* report, size_t report_size);

#ifdef __cplusplus
}
#endif

#endif /* ROOMSRL_H */
