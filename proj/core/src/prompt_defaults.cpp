// Embedded default templates. A prompt pack directory can override any of
// these pieces file-by-file; configs/prompts ships the same content.
#include "coop/prompts_defaults.hpp"

namespace coop::defaults {

const char* kPlanningBase =
    R"(You are $AGENT_NAME$, a household agent working on a task.

Goal: $GOAL$

Progress: $PROGRESS$

Dialogue history:
$DIALOGUE$

Actions taken:
$ACTIONS_TAKEN$

Available actions:
$AVAILABLE_ACTIONS$

Please help me choose the best available action. Reply with the letter of exactly one option.
)";

const char* kPlanningImproved =
    R"(You are $AGENT_NAME$, a household agent working on a task.

Goal: $GOAL$

Progress: $PROGRESS$

Dialogue history:
$DIALOGUE$

Actions taken:
$ACTIONS_TAKEN$

Available actions:
$AVAILABLE_ACTIONS$

You should select the most efficient action based on the goal, progress, and available options. Ensure your choice contributes directly to goal completion. Reply with the letter of exactly one option.
)";

const char* kPlanningStructured =
    R"(You are $AGENT_NAME$, a household agent working on a task.

Goal: $GOAL$

Progress: $PROGRESS$

Dialogue history:
$DIALOGUE$

Actions taken:
$ACTIONS_TAKEN$

Available actions:
$AVAILABLE_ACTIONS$

Before choosing, reason step by step through these questions:
1. What does the goal require, and what is still missing?
2. What is the current state: where are the remaining target objects, and what are you carrying?
3. For each available action, does it move you closer to completing the goal?
4. Which single action is the most efficient next step?

Please help me choose the best available action. Reply with the letter of exactly one option on the last line.
)";

const char* kCommSkeleton =
    R"(You are $AGENT_NAME$. You cooperate with $OPPO_NAME$ on a household task and chose to send $OPPO_NAME$ a message.

Goal: $GOAL$

Progress: $PROGRESS$

Dialogue history:
$DIALOGUE$

Actions taken:
$ACTIONS_TAKEN$

$EXAMPLE$$INSTRUCTION$
)";

const char* kCommInstructionBase =
    R"(Please reply to $OPPO_NAME$ with a brief, accurate message that helps the team finish the goal sooner.)";

const char* kCommInstructionConcise =
    R"(Reply with a brief, accurate message. Write only the message itself: no explanations, no reasoning, no lists, and no formatting. Respond as if speaking directly to $OPPO_NAME$.)";

const char* kCommExampleOneShot =
    R"($AGENT_NAME$: I found the plates in the kitchen and will carry them over.
$OPPO_NAME$: Got it. I will search the bedroom for the forks.)";

const char* kCommExampleMultiShot =
    R"($AGENT_NAME$: I found two plates in the kitchen and will carry them over.
$OPPO_NAME$: Got it. I will search the bedroom for the forks.
$AGENT_NAME$: The bedroom had only one fork; the rest may be in the living room.
$OPPO_NAME$: I will check the living room next and bring what I find.
$AGENT_NAME$: I dropped off the plates. Tell me if you need a hand carrying.
$OPPO_NAME$: One fork to go. We are almost done.)";

const char* kActionBase =
    R"(Available actions:
$AVAILABLE_ACTIONS$

Choose the next action from the given actions above. Reply with the letter of one option.
)";

const char* kActionOneShotExample =
    R"(You must answer with exactly one option letter from the list, and nothing else.

Example input:
A. wait
B. go grab cup_2 (cup)
C. explore the garage
Example answer: B)";

}  // namespace coop::defaults
