/**
 * Status color mapping - kept identical to the service's DOT export so every
 * rendering surface paints the same pixel for the same status (documented in
 * the API docs as the single source of truth).
 */
export const STATUS_COLORS = {
    Achieved: "green",
    NotAchieved: "red",
    Suspected: "orange",
    Unknown: "gray",
    OutOfCourse: "gray",
};
/**
 * Aggregate a concept's outcome statuses to one node color, mirroring the
 * server's DOT rules: all achieved wins, then any failure, then any
 * suspicion, otherwise gray. Purely a projection of served statuses; the
 * client never derives a status from answers.
 */
export function conceptColor(statuses) {
    if (statuses.length > 0 && statuses.every((s) => s === "Achieved")) {
        return STATUS_COLORS.Achieved;
    }
    if (statuses.some((s) => s === "NotAchieved")) {
        return STATUS_COLORS.NotAchieved;
    }
    if (statuses.some((s) => s === "Suspected")) {
        return STATUS_COLORS.Suspected;
    }
    return STATUS_COLORS.Unknown;
}
