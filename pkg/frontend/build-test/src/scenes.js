// Client-side scene machine. It mirrors the server's stager: exactly one
// view is active, transitions happen only on server scene messages, and
// anything out of order (a repeated scene, a scene while a game is
// running) is rejected.
export class SceneMachine {
    current = null;
    gameActive = false;
    visited = new Set();
    onChange = null;
    accept(message) {
        if (this.gameActive) {
            throw new Error(`scene ${message.scene_id} received mid-game`);
        }
        if (this.visited.has(message.scene_id)) {
            throw new Error(`scene ${message.scene_id} already shown`);
        }
        if (this.current?.kind === "end") {
            throw new Error("no scenes after the completion page");
        }
        this.visited.add(message.scene_id);
        this.current = message;
        this.onChange?.(message);
    }
    beginGame() {
        if (this.current?.kind !== "gym") {
            throw new Error("no gym scene active");
        }
        this.gameActive = true;
    }
    endGame() {
        this.gameActive = false;
    }
}
