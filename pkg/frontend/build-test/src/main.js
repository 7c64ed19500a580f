/** Browser bootstrap: bind the controller to the document. */
import { ApiClient } from "./api.js";
import { ConsoleApp } from "./app.js";
function domMount() {
    return {
        set(pane, html) {
            const element = document.getElementById(pane);
            if (element) {
                element.innerHTML = html;
            }
        },
    };
}
function value(id) {
    return document.getElementById(id)?.value.trim() ?? "";
}
function main() {
    const base = value("service-url") || window.location.origin;
    const app = new ConsoleApp(new ApiClient(base), domMount());
    document.getElementById("load-course")?.addEventListener("click", () => {
        const pool = value("pool-id");
        void app.loadCourse(value("course-id"), value("course-concepts"), value("learner-id"), pool === "" ? null : pool);
    });
    document.addEventListener("click", (event) => {
        const el = event.target.closest("[data-action]");
        if (!el) {
            return;
        }
        const action = el.dataset.action;
        if (action === "start-assessment" && el.dataset.lo) {
            void app.startAssessment(el.dataset.lo);
        }
        else if (action === "toggle-option") {
            app.toggleOption(Number(el.dataset.index));
        }
        else if (action === "submit-answer") {
            void app.submitAnswer();
        }
        else if (action === "select-plan") {
            app.selectPlanVariant(Number(el.dataset.index));
        }
        else if (action === "pick-resource" && el.dataset.lo && el.dataset.resource) {
            void app.pickResource(el.dataset.lo, el.dataset.resource);
        }
    });
}
main();
