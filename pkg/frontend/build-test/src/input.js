// Keyboard capture: latest bound keydown wins per tick, unbound keys are
// ignored, and focus/blur changes surface as events for the server.
export class InputCapture {
    keyMap;
    noop;
    latest = null;
    listeners = [];
    // Fired immediately on every bound keydown (server-authoritative mode
    // sends these as they happen and lets the server sample).
    onAction = null;
    onFocusChange = null;
    constructor(keyMap, noop) {
        this.keyMap = keyMap;
        this.noop = noop;
    }
    attach(target, focusTarget) {
        const keydown = (event) => {
            const key = event.key;
            const action = this.keyMap[key];
            if (action === undefined)
                return; // unbound keys ignored
            event.preventDefault?.();
            this.latest = action;
            this.onAction?.(action);
        };
        const blur = () => this.onFocusChange?.(true);
        const focus = () => this.onFocusChange?.(false);
        target.addEventListener("keydown", keydown);
        const ft = focusTarget ?? target;
        ft.addEventListener("blur", blur);
        ft.addEventListener("focus", focus);
        this.listeners = [["keydown", keydown]];
        this.focusListeners = [ft, [["blur", blur], ["focus", focus]]];
        this.keyTarget = target;
    }
    keyTarget = null;
    focusListeners = null;
    detach() {
        if (this.keyTarget) {
            for (const [name, fn] of this.listeners) {
                this.keyTarget.removeEventListener(name, fn);
            }
        }
        if (this.focusListeners) {
            const [target, pairs] = this.focusListeners;
            for (const [name, fn] of pairs)
                target.removeEventListener(name, fn);
        }
        this.keyTarget = null;
        this.focusListeners = null;
    }
    // Most recent bound keydown since the last take; noop when none.
    takeAction() {
        const action = this.latest ?? this.noop;
        this.latest = null;
        return action;
    }
}
